#![allow(dead_code)]

use std::path::PathBuf;

use scherk_core::arcs::{arc_horocycle_intersection, EuclidShape, HArc, Horocycle, Side};
use scherk_core::domain::{
    default_std_sizes, solve_d3_star, standard_horocycle_system, standard_quadrilateral, CellComplex, D3Mode,
    HorocycleSystem, IdealDomain,
};
use scherk_core::extend::place_quadrilateral;
use scherk_core::hyp2::HPoint;
use scherk_core::numerics::Quadrature;

pub fn seed(mu: f64, h: f64) -> (IdealDomain, HorocycleSystem) {
    let quad = Quadrature::default();
    let dom = standard_quadrilateral(mu, h, D3Mode::ComputedRoot, &quad).unwrap();
    let p = dom.complex.cells()[0].params;
    let (r, m) = default_std_sizes(&p);
    (dom, standard_horocycle_system(&p, r, m).unwrap())
}

/// `n` cells glued in a row, each new cell attached to a side of the previous
/// one that is not shared with anything else.
pub fn chain(h: f64, n: usize) -> CellComplex {
    let quad = Quadrature::default();
    let star = solve_d3_star(1.0, h, &quad).unwrap();
    let (mut dom, _) = seed(1.0, h);
    for k in 1..n {
        let last = k - 1;
        let side = dom
            .cycle
            .iter()
            .rev()
            .find(|s| dom.complex.edges()[s.edge].cells.iter().any(|&(c, _)| c == last))
            .unwrap()
            .edge;
        let placed = place_quadrilateral(&dom, side, 1.0, star).unwrap();
        let mut c = dom.complex.clone();
        c.attach(&placed.attachment(), &quad).unwrap();
        dom = IdealDomain::new(c).unwrap();
    }
    dom.complex.with_atomic_blocks()
}

/// Runs the CLI in-process, returning `(exit code, stdout, stderr)`.
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("scherk").chain(args.iter().copied()).collect();
    let code = scherk_core::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn scratch_dir() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

/// Golden outputs: `(file name, CLI arguments)`. SVG cases write to `{out}`.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("quad_h025.json", &["quad", "--H", "0.25"]),
    ("quad_h0_paper.json", &["quad", "--H", "0", "--mode", "paper"]),
    ("compare_paper.json", &["compare-paper"]),
    ("extend_standard.json", &["extend", "--standard", "--H", "0.25"]),
    ("quad_h025.svg", &["quad", "--H", "0.25", "--json", "{tmp}", "--svg", "{out}"]),
    ("extend_disk.svg", &["extend", "--standard", "--H", "0.25", "--json", "{tmp}", "--svg", "{out}", "--chart", "disk"]),
];

/// Produces the bytes of one golden case.
pub fn golden_output(name: &str, args: &[&str]) -> Vec<u8> {
    let dir = scratch_dir();
    let out = dir.path().join(name);
    let tmp = dir.path().join("side.json");
    let argv: Vec<String> = args
        .iter()
        .map(|a| a.replace("{out}", out.to_str().unwrap()).replace("{tmp}", tmp.to_str().unwrap()))
        .collect();
    let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
    let (code, stdout, stderr) = run_cli(&argv);
    assert_eq!(code, 0, "{name}: {stderr}");
    if name.ends_with(".svg") {
        std::fs::read(&out).unwrap()
    } else {
        stdout.into_bytes()
    }
}

/// Area of a quadrilateral with its four horodisk corners removed, as the
/// boundary integral of `dx / y` (Green's theorem for `dx dy / y^2`).
/// `sides[k]` runs from vertex `k - 1` to vertex `k`; `hs[k]` sits at vertex `k`.
pub fn green_area(sides: &[HArc; 4], hs: &[Horocycle; 4], interior: HPoint) -> f64 {
    use std::f64::consts::TAU;
    let quad = Quadrature::with_tol(1e-9);
    let orient = if sides[1].side_of(interior) == Side::Left { 1.0 } else { -1.0 };
    let mut total = 0.0;
    for k in 0..4 {
        let arc = &sides[k];
        let next = &sides[(k + 1) % 4];
        assert!(arc.b.approx_eq(&next.a, 1e-12), "sides do not form a cycle");
        let p = arc_horocycle_intersection(arc, &hs[(k + 3) % 4]).unwrap();
        let q = arc_horocycle_intersection(arc, &hs[k]).unwrap();
        total += match arc.euclid {
            EuclidShape::Line { slope, .. } => slope * (q.y / p.y).ln(),
            EuclidShape::Circle { cy, radius, .. } => quad
                .integrate(|t| -radius * t.sin() / (cy + radius * t.sin()), arc.param_of(p), arc.param_of(q))
                .unwrap(),
        };
        let p_next = arc_horocycle_intersection(next, &hs[k]).unwrap();
        let h = &hs[k];
        total += match h.base.x() {
            None => (p_next.x - q.x) / h.size,
            Some(x0) => {
                let angle = |z: HPoint| (z.y - h.size).atan2(z.x - x0);
                let (fq, fp) = (angle(q), angle(p_next));
                let sweep = -orient * (orient * (fq - fp)).rem_euclid(TAU);
                quad.integrate(|f| -f.sin() / (1.0 + f.sin()), fq, fq + sweep).unwrap()
            }
        };
    }
    orient * total
}
