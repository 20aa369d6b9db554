//! Attaching perturbed quadrilaterals to side pairs of an ideal domain.

use serde::{Deserialize, Serialize};

use crate::arcs::{arc_horocycle_intersection, foot_coordinate, perpendicular_at, HArc, Horocycle, Side};
use crate::domain::{
    bracket_floor, check_admissibility, default_std_sizes, edge_length, solve_d3_for_balance, solve_d3_star,
    standard_horocycles, AdmissibilityReport, Attachment, Block, CellComplex, CellId, EdgeId, HorocycleSystem,
    IdealDomain, Measurer, SideKind, Tolerances, VertexId,
};
use crate::error::{Error, Result};
use crate::hyp2::{map_from_boundary_triple, BoundaryPoint, IsometryMap, Transform};
use crate::numerics::Quadrature;
use crate::regions::{QuadParams, STD_SIDE_VERTICES};

/// Which kind of host side a cell is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    /// Attached to an A side; glued along its own B1.
    E,
    /// Attached to a B side; glued along its own A1.
    EPrime,
}

impl Role {
    pub fn matched_side(self) -> usize {
        match self {
            Role::E => 1,
            Role::EPrime => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacedCell {
    pub params: QuadParams,
    pub chart: IsometryMap,
    pub host_edge: EdgeId,
    pub matched_side: usize,
    pub role: Role,
    pub new_vertices: [BoundaryPoint; 2],
}

impl PlacedCell {
    pub fn attachment(&self) -> Attachment {
        Attachment {
            params: self.params,
            chart: self.chart,
            host_edge: self.host_edge,
            matched_side: self.matched_side,
        }
    }
}

/// Horocycle used to position cells at vertex `v`: the standard horocycle
/// of the first cell containing `v`, carried by that cell's chart.
pub fn reference_horocycle(complex: &CellComplex, v: VertexId) -> Result<Horocycle> {
    let (cell, i) = complex
        .cells()
        .iter()
        .find_map(|c| c.vertices.iter().position(|&w| w == v).map(|i| (c, i)))
        .ok_or_else(|| Error::Complex(format!("vertex {v} belongs to no cell")))?;
    let (r, m) = default_std_sizes(&cell.params);
    let mut h = standard_horocycles(&cell.params, r, m)?[i].transformed(&cell.chart);
    h.base = complex.vertices()[v];
    Ok(h)
}

/// Foot coordinate, on the geodesic under `arc`, of the midpoint of the part
/// of `arc` outside the horodisks `ha` (at `arc.a`) and `hb` (at `arc.b`).
fn truncated_midpoint(arc: &HArc, ha: &Horocycle, hb: &Horocycle) -> Result<f64> {
    let sa = foot_coordinate(&arc.a, &arc.b, arc_horocycle_intersection(arc, ha)?);
    let sb = foot_coordinate(&arc.a, &arc.b, arc_horocycle_intersection(arc, hb)?);
    Ok(0.5 * (sa + sb))
}

/// Places a standard cell with parameters `(mu, d3)` across a boundary side
/// of the host: B1 is glued to an A side, A1 to a B side. Along the shared
/// side, the midpoint of the cell's truncated side (standard horocycles)
/// is put on the midpoint of the host's truncated side (reference
/// horocycles).
pub fn place_quadrilateral(host: &IdealDomain, side: EdgeId, mu: f64, d3: f64) -> Result<PlacedCell> {
    let complex = &host.complex;
    let bs = host
        .cycle
        .iter()
        .find(|s| s.edge == side)
        .ok_or_else(|| Error::Extension(format!("edge {side} is not a boundary side of the host")))?;
    let role = match bs.kind {
        SideKind::A => Role::E,
        SideKind::B => Role::EPrime,
    };
    let matched = role.matched_side();
    let host_arc = complex.edge_arc(side);
    let u = complex.vertices()[bs.from];
    let v = complex.vertices()[bs.to];
    if !(host_arc.a.approx_eq(&u, 1e-12) && host_arc.b.approx_eq(&v, 1e-12)) {
        return Err(Error::Complex(format!("edge {side} is not oriented along the boundary cycle")));
    }
    let host_mid = truncated_midpoint(
        &host_arc,
        &reference_horocycle(complex, bs.from)?,
        &reference_horocycle(complex, bs.to)?,
    )?;
    let (_, exterior) = perpendicular_at(&u, &v, host_mid)?;

    let params = QuadParams::new(mu, d3, complex.h())?;
    let (ms, me) = STD_SIDE_VERTICES[matched];
    let std_v = params.vertices();
    let (r, m) = default_std_sizes(&params);
    let std_hs = standard_horocycles(&params, r, m)?;
    let own_arc = params.sides()[matched];
    let own_mid = truncated_midpoint(&own_arc, &std_hs[ms], &std_hs[me])?;
    let (inward, _) = perpendicular_at(&std_v[ms], &std_v[me], own_mid)?;

    let src = [std_v[ms], std_v[me], inward];
    let dst = [u, v, exterior];
    let chart = map_from_boundary_triple(src, dst, false)
        .or_else(|_| map_from_boundary_triple(src, dst, true))
        .map_err(|e| Error::Extension(format!("no orientation class matches the host side: {e}")))?;

    let image = chart.apply(&own_arc);
    for p in image.probe_points(5) {
        let res = host_arc.residual(p);
        // coordinates carry absolute rounding error, magnified by 1/y in the residual
        if res > 1e-10 + 1e-13 * p.x.hypot(p.y) / p.y {
            return Err(Error::Extension(format!(
                "placed side deviates from the host side by {res:e} at {p}"
            )));
        }
    }
    let probe = chart.apply_point(params.interior_point());
    if host_arc.side_of(probe) != Side::Right {
        return Err(Error::Extension("placed cell overlaps the host".into()));
    }
    let new_idx: [usize; 2] = match role {
        Role::E => [2, 3],
        Role::EPrime => [1, 2],
    };
    Ok(PlacedCell {
        params,
        chart,
        host_edge: side,
        matched_side: matched,
        role,
        new_vertices: new_idx.map(|i| chart.apply_boundary(std_v[i])),
    })
}

/// Signed defect of a placed cell: `-(α - β - 2H𝒜)` for E cells and
/// `+(α - β - 2H𝒜)` for E′ cells, measured against the global system.
pub fn phi_value(complex: &CellComplex, cell: CellId, role: Role, hs: &HorocycleSystem) -> Result<f64> {
    let m = Measurer::new(complex, hs)?.cell_measures(cell)?;
    let g = m.balance(complex.h());
    Ok(match role {
        Role::E => -g,
        Role::EPrime => g,
    })
}

/// Gives each vertex of `cell` lacking a horocycle the image of the cell's
/// standard horocycle, halved until it is disjoint from all others.
pub fn assign_new_horocycles(complex: &CellComplex, cell: CellId, hs: &mut HorocycleSystem) -> Result<Vec<VertexId>> {
    let c = &complex.cells()[cell];
    let (r, m) = default_std_sizes(&c.params);
    let std_hs = standard_horocycles(&c.params, r, m)?;
    let mut added = Vec::new();
    for (i, &v) in c.vertices.iter().enumerate() {
        if hs.get(v).is_some() {
            continue;
        }
        let mut h: Horocycle = std_hs[i].transformed(&c.chart);
        h.base = complex.vertices()[v];
        let mut halvings = 0;
        while !hs.is_disjoint_from(&h) {
            halvings += 1;
            if halvings > 200 {
                return Err(Error::Horocycle(format!(
                    "no disjoint horocycle found for new vertex {v}"
                )));
            }
            h = h.shrunk(0.5);
        }
        hs.set(v, h);
        added.push(v);
    }
    Ok(added)
}

/// Slacks of one polygon case of an attached pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSlack {
    pub case: String,
    pub polygon: String,
    pub s_a: f64,
    pub s_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionRecord {
    pub a_edge: EdgeId,
    pub b_edge: EdgeId,
    /// Host vertices `a0, a1, a2` of the pair.
    pub vertices: [VertexId; 3],
    pub len_a0a1: f64,
    pub len_a1a2: f64,
    pub phi_target: f64,
    pub phi_e: f64,
    pub phi_eprime: f64,
    pub tau_e: f64,
    pub tau_eprime: f64,
    pub d3_e: f64,
    pub d3_eprime: f64,
    pub cells: [CellId; 2],
    pub new_vertices: Vec<VertexId>,
    pub cases: Vec<CaseSlack>,
    pub report: AdmissibilityReport,
}

impl ExtensionRecord {
    pub fn case(&self, name: &str) -> Option<&CaseSlack> {
        self.cases.iter().find(|c| c.case == name)
    }

    /// Smallest slack over the proper polygons of this attachment.
    pub fn min_slack(&self) -> f64 {
        self.cases
            .iter()
            .filter(|c| c.case != "vii")
            .map(|c| c.s_a.min(c.s_b))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Shared inputs of the pair constructions in one extension step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairContext {
    pub mu: f64,
    pub d3_star: f64,
    pub tol: Tolerances,
    pub quad: Quadrature,
}

impl PairContext {
    pub fn new(mu: f64, h: f64, tol: Tolerances, quad: Quadrature) -> Result<Self> {
        Ok(Self {
            mu,
            d3_star: solve_d3_star(mu, h, &quad)?,
            tol,
            quad,
        })
    }
}

const CASES: [(&str, &str); 7] = [
    ("i", "∂(E)"),
    ("ii", "∂(E')"),
    ("iii", "∂(D)"),
    ("iv", "∂(D∪E')"),
    ("v", "∂(D∪E)"),
    ("vi", "∂(E∪E')"),
    ("vii", "outer"),
];

/// Attaches `E` to the A side and `E′` to the following B side, with the
/// `d3` of each solved so that both defects equal `phi_target`; verifies the
/// three-block chain host, E, E′.
pub fn balance_pair(
    host: &IdealDomain,
    hs: &HorocycleSystem,
    a_edge: EdgeId,
    b_edge: EdgeId,
    phi_target: f64,
    ctx: &PairContext,
) -> Result<(IdealDomain, HorocycleSystem, ExtensionRecord)> {
    let find = |e: EdgeId| host.cycle.iter().find(|s| s.edge == e).copied();
    let (a, b) = match (find(a_edge), find(b_edge)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Extension("pair sides must be boundary sides of the host".into())),
    };
    if a.kind != SideKind::A || b.kind != SideKind::B || a.to != b.from {
        return Err(Error::Extension(format!(
            "edges {a_edge} and {b_edge} are not a consecutive (A, B) pair"
        )));
    }
    let complex = &host.complex;
    let h = complex.h();
    let quad = &ctx.quad;
    let len_a = edge_length(complex, hs, a_edge)?;
    let len_b = edge_length(complex, hs, b_edge)?;
    if !(phi_target >= 0.0) {
        return Err(Error::Extension(format!("phi target must be nonnegative, got {phi_target}")));
    }
    if phi_target >= 2.0 * len_a.min(len_b) {
        return Err(Error::Extension(format!(
            "phi target {phi_target} is too large for host sides of lengths {len_a} and {len_b}"
        )));
    }

    let (d3_e, d3_ep) = if phi_target == 0.0 {
        (ctx.d3_star, ctx.d3_star)
    } else {
        let floor = bracket_floor(ctx.mu, h)?;
        let d3_e = solve_d3_for_balance(ctx.mu, h, -phi_target, floor, ctx.d3_star, quad)
            .map_err(|e| Error::Extension(format!("E perturbation: {e}")))?;
        let d3_ep = solve_d3_for_balance(ctx.mu, h, phi_target, ctx.d3_star, 2.0 * ctx.d3_star, quad)
            .map_err(|e| Error::Extension(format!("E' perturbation: {e}")))?;
        (d3_e, d3_ep)
    };

    let e = place_quadrilateral(host, a_edge, ctx.mu, d3_e)?;
    let ep = place_quadrilateral(host, b_edge, ctx.mu, d3_ep)?;
    let mut next = complex.clone();
    let cid_e = next.attach(&e.attachment(), quad)?;
    let cid_ep = next.attach(&ep.attachment(), quad)?;
    let mut hs2 = hs.clone();
    let mut new_vertices = assign_new_horocycles(&next, cid_e, &mut hs2)?;
    new_vertices.extend(assign_new_horocycles(&next, cid_ep, &mut hs2)?);

    let host_cells: Vec<CellId> = (0..complex.cells().len()).collect();
    let chain = next.clone().with_blocks(vec![
        Block { name: "D".into(), cells: host_cells },
        Block { name: "E".into(), cells: vec![cid_e] },
        Block { name: "E'".into(), cells: vec![cid_ep] },
    ])?;
    let report = check_admissibility(&chain, &hs2, &ctx.tol)?;
    let phi_e = phi_value(&next, cid_e, Role::E, &hs2)?;
    let phi_eprime = phi_value(&next, cid_ep, Role::EPrime, &hs2)?;
    let cases = CASES
        .iter()
        .filter_map(|(case, label)| {
            report.polygons.iter().find(|p| p.label == *label || (p.outer && *label == "outer")).map(|p| CaseSlack {
                case: case.to_string(),
                polygon: p.label.clone(),
                s_a: p.s_a,
                s_b: p.s_b,
            })
        })
        .collect();
    let record = ExtensionRecord {
        a_edge,
        b_edge,
        vertices: [a.from, a.to, b.to],
        len_a0a1: len_a,
        len_a1a2: len_b,
        phi_target,
        phi_e,
        phi_eprime,
        tau_e: ctx.d3_star - d3_e,
        tau_eprime: d3_ep - ctx.d3_star,
        d3_e,
        d3_eprime: d3_ep,
        cells: [cid_e, cid_ep],
        new_vertices,
        cases,
        report,
    };
    Ok((IdealDomain::new(next)?, hs2, record))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionPolicy {
    /// φ target as a fraction of the shorter host side of each pair.
    pub phi_ratio: f64,
    /// μ of attached cells in their standard charts.
    pub mu: f64,
    /// Every proper slack must stay above this multiple of the slack threshold.
    pub slack_floor_factor: f64,
    pub max_halvings: usize,
    /// Largest cell count for which every connected union of cells is checked.
    pub full_check_max_cells: usize,
    pub tol: Tolerances,
}

impl Default for ExtensionPolicy {
    fn default() -> Self {
        Self {
            phi_ratio: 0.01,
            mu: 1.0,
            slack_floor_factor: 10.0,
            max_halvings: 40,
            full_check_max_cells: 20,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionOutcome {
    pub domain: IdealDomain,
    pub hs: HorocycleSystem,
    pub records: Vec<ExtensionRecord>,
    /// Check over every connected union of cells, when the complex is small enough.
    pub full_check: Option<AdmissibilityReport>,
    pub guarantee: String,
    pub pass: bool,
}

impl ExtensionOutcome {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .records
            .iter()
            .flat_map(|r| {
                r.report
                    .failures
                    .iter()
                    .map(move |f| format!("pair ({}, {}): {f}", r.a_edge, r.b_edge))
            })
            .collect();
        if let Some(full) = &self.full_check {
            out.extend(full.failures.iter().map(|f| format!("full check: {f}")));
        }
        out
    }
}

pub const GUARANTEE_PER_ATTACHMENT: &str =
    "per attachment: host, E, E' chain (balance of the new boundary and all six proper unions)";

/// Extends every side pair of the domain, returning the outcome even when
/// some check fails.
pub fn try_extend(host: &IdealDomain, hs: &HorocycleSystem, policy: &ExtensionPolicy, quad: &Quadrature) -> Result<ExtensionOutcome> {
    if !(policy.phi_ratio >= 0.0 && policy.phi_ratio < 1.0) {
        return Err(Error::Extension(format!("phi ratio must lie in [0, 1), got {}", policy.phi_ratio)));
    }
    let ctx = PairContext::new(policy.mu, host.h(), policy.tol, *quad)?;
    let floor = policy.slack_floor_factor * policy.tol.slack;
    let mut domain = host.clone();
    let mut hs = hs.clone();
    let mut records = Vec::new();
    for (a, b) in host.side_pairs() {
        let len_a = edge_length(&domain.complex, &hs, a.edge)?;
        let len_b = edge_length(&domain.complex, &hs, b.edge)?;
        let mut phi = policy.phi_ratio * len_a.min(len_b);
        let mut attempt = 0;
        let (next, next_hs, rec) = loop {
            let out = balance_pair(&domain, &hs, a.edge, b.edge, phi, &ctx)?;
            let low = out.2.min_slack() < floor;
            if phi > 0.0 && low && attempt < policy.max_halvings {
                phi *= 0.5;
                attempt += 1;
                continue;
            }
            break out;
        };
        domain = next;
        hs = next_hs;
        records.push(rec);
    }
    let full_check = if domain.complex.cells().len() <= policy.full_check_max_cells {
        let atomic = domain.complex.clone().with_atomic_blocks();
        Some(check_admissibility(&atomic, &hs, &policy.tol)?)
    } else {
        None
    };
    let guarantee = match &full_check {
        Some(_) => format!("{GUARANTEE_PER_ATTACHMENT}; all connected unions of cells of the final complex"),
        None => GUARANTEE_PER_ATTACHMENT.to_string(),
    };
    let pass = records.iter().all(|r| r.report.pass) && full_check.as_ref().is_none_or(|f| f.pass);
    Ok(ExtensionOutcome {
        domain,
        hs,
        records,
        full_check,
        guarantee,
        pass,
    })
}

/// Extends every side pair; a failing check is an error carrying the diagnostics.
pub fn extend_domain(host: &IdealDomain, hs: &HorocycleSystem, policy: &ExtensionPolicy, quad: &Quadrature) -> Result<ExtensionOutcome> {
    let out = try_extend(host, hs, policy, quad)?;
    if !out.pass {
        return Err(Error::NotAdmissible(out.failures().join("; ")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{standard_horocycle_system, standard_quadrilateral, D3Mode};

    fn seed(h: f64) -> (IdealDomain, HorocycleSystem) {
        let quad = Quadrature::default();
        let dom = standard_quadrilateral(1.0, h, D3Mode::ComputedRoot, &quad).unwrap();
        let params = dom.complex.cells()[0].params;
        let (r, m) = default_std_sizes(&params);
        let hs = standard_horocycle_system(&params, r, m).unwrap();
        (dom, hs)
    }

    #[test]
    fn placement_matches_host_side_and_lies_outside() {
        let (dom, _) = seed(0.25);
        let quad = Quadrature::default();
        let star = solve_d3_star(1.0, 0.25, &quad).unwrap();
        for s in &dom.cycle {
            let placed = place_quadrilateral(&dom, s.edge, 1.0, star).unwrap();
            let expected = match s.kind {
                SideKind::A => Role::E,
                SideKind::B => Role::EPrime,
            };
            assert_eq!(placed.role, expected);
            let mut c = dom.complex.clone();
            let id = c.attach(&placed.attachment(), &quad).unwrap();
            assert_eq!(c.cells().len(), 2);
            assert_eq!(c.cells()[id].vertices.iter().filter(|&&v| v < 4).count(), 2);
        }
    }

    #[test]
    fn pair_at_phi_zero_has_zero_slack_at_the_new_cells() {
        let (dom, hs) = seed(0.25);
        let quad = Quadrature::default();
        let ctx = PairContext::new(1.0, 0.25, Tolerances::default(), quad).unwrap();
        let (a, b) = dom.side_pairs()[0];
        let (_, _, rec) = balance_pair(&dom, &hs, a.edge, b.edge, 0.0, &ctx).unwrap();
        let i = rec.case("i").unwrap();
        assert!(i.s_a.abs() < 1e-8, "{}", i.s_a);
        assert!(!rec.report.pass);
    }

    #[test]
    fn pair_slacks_follow_the_case_table() {
        let (dom, hs) = seed(0.25);
        let quad = Quadrature::default();
        let ctx = PairContext::new(1.0, 0.25, Tolerances::default(), quad).unwrap();
        let (a, b) = dom.side_pairs()[0];
        let (_, _, rec) = balance_pair(&dom, &hs, a.edge, b.edge, 0.1, &ctx).unwrap();
        let (l01, l12, phi) = (rec.len_a0a1, rec.len_a1a2, 0.1);
        assert!((rec.phi_e - phi).abs() < 1e-8 && (rec.phi_eprime - phi).abs() < 1e-8);
        let table = [
            ("i", phi, 2.0 * l01 - phi),
            ("ii", 2.0 * l12 - phi, phi),
            ("iii", 2.0 * l01, 2.0 * l12),
            ("iv", 2.0 * l01 - phi, phi),
            ("v", phi, 2.0 * l12 - phi),
            ("vi", 2.0 * l12, 2.0 * l01),
        ];
        for (case, sa, sb) in table {
            let c = rec.case(case).unwrap();
            assert!((c.s_a - sa).abs() < 1e-7, "{case}: s_A {} vs {sa}", c.s_a);
            assert!((c.s_b - sb).abs() < 1e-7, "{case}: s_B {} vs {sb}", c.s_b);
        }
        assert!(rec.case("vii").unwrap().s_a.abs() < 1e-7);
        assert!(rec.report.pass, "{:?}", rec.report.failures);
    }

    #[test]
    fn one_step_extension_is_admissible() {
        for h in [0.0, 0.25, 0.45] {
            let (dom, hs) = seed(h);
            let out = extend_domain(&dom, &hs, &ExtensionPolicy::default(), &Quadrature::default()).unwrap();
            assert_eq!(out.domain.complex.cells().len(), 5);
            assert_eq!(out.domain.side_count(), 12);
            assert!(out.full_check.as_ref().unwrap().pass);
        }
    }

    #[test]
    fn extension_commutes_with_isometries() {
        let (dom, hs) = seed(0.25);
        let quad = Quadrature::default();
        let g = IsometryMap::new(2.0, 1.0, 0.5, 0.75, false).unwrap();
        let a = extend_domain(&dom, &hs, &ExtensionPolicy::default(), &quad).unwrap();
        let b = extend_domain(&dom.transformed(&g), &hs.transformed(&g), &ExtensionPolicy::default(), &quad).unwrap();
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert!((ra.min_slack() - rb.min_slack()).abs() < 1e-8);
        }
        let va: Vec<_> = a.domain.complex.vertices().iter().map(|v| v.transformed(&g)).collect();
        for v in &va {
            assert!(b.domain.complex.vertices().iter().any(|w| w.approx_eq(v, 1e-8)));
        }
    }
}
