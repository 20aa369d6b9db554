//! SVG scenes of ideal domains in the half-plane or disk chart.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arcs::{EuclidShape, HArc, Horocycle};
use crate::domain::{HorocycleSystem, IdealDomain, SideKind};
use crate::hyp2::HPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    Halfplane,
    Disk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub chart: Chart,
    pub size: f64,
    /// Half-plane window `[x_min, x_max] x [0, y_max]`; derived from the vertices when absent.
    pub viewport: Option<[f64; 3]>,
    pub a_stroke: String,
    pub b_stroke: String,
    pub interior_stroke: String,
    pub horocycle_stroke: String,
    pub show_interior: bool,
    pub show_horocycles: bool,
}

impl SceneSpec {
    pub fn new(chart: Chart) -> Self {
        Self {
            chart,
            size: 800.0,
            viewport: None,
            a_stroke: "#c0392b".into(),
            b_stroke: "#2471a3".into(),
            interior_stroke: "#999999".into(),
            horocycle_stroke: "#27ae60".into(),
            show_interior: true,
            show_horocycles: true,
        }
    }
}

/// Cayley map of the half-plane onto the unit disk, `(0, 1)` to the centre.
pub fn to_disk(p: HPoint) -> (f64, f64) {
    // (z - i) / (z + i)
    let (x, y) = (p.x, p.y);
    let den = x * x + (y + 1.0) * (y + 1.0);
    ((x * x + y * y - 1.0) / den, -2.0 * x / den)
}

fn sample_arc(arc: &HArc, n: usize) -> Vec<HPoint> {
    match arc.euclid {
        EuclidShape::Circle { .. } => {
            let (ta, tb) = arc.param_range();
            (0..=n)
                .map(|i| {
                    // cosine spacing concentrates samples near the ideal ends
                    let s = 0.5 - 0.5 * (std::f64::consts::PI * i as f64 / n as f64).cos();
                    arc.point_at(ta + (tb - ta) * s)
                })
                .filter(|p| p.y > 0.0)
                .collect()
        }
        EuclidShape::Line { .. } => {
            let mut pts: Vec<HPoint> = (0..=n)
                .map(|i| arc.point_at(10f64.powf(-8.0 + 16.0 * i as f64 / n as f64)))
                .collect();
            if arc.a.is_infinite() {
                pts.reverse();
            }
            pts
        }
    }
}

fn sample_horocycle(h: &Horocycle, n: usize) -> Vec<HPoint> {
    match h.base.x() {
        Some(x) => (0..=n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                HPoint { x: x + h.size * t.sin(), y: h.size * (1.0 - t.cos()) }
            })
            .filter(|p| p.y > 0.0)
            .collect(),
        None => (1..n)
            .map(|i| {
                let t = std::f64::consts::PI * (i as f64 / n as f64 - 0.5);
                HPoint { x: h.size * t.tan(), y: h.size }
            })
            .collect(),
    }
}

struct Frame {
    chart: Chart,
    size: f64,
    x_min: f64,
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn map(&self, p: HPoint) -> (f64, f64) {
        match self.chart {
            Chart::Halfplane => {
                let s = self.size / (self.x_max - self.x_min);
                ((p.x - self.x_min) * s, self.size - p.y * s)
            }
            Chart::Disk => {
                let (u, v) = to_disk(p);
                let r = 0.48 * self.size;
                (0.5 * self.size + r * u, 0.5 * self.size - r * v)
            }
        }
    }

    fn height(&self) -> f64 {
        match self.chart {
            Chart::Halfplane => self.size * self.y_max / (self.x_max - self.x_min),
            Chart::Disk => self.size,
        }
    }

    fn polyline(&self, pts: &[HPoint], stroke: &str, extra: &str) -> String {
        let mut s = String::from("<polyline fill=\"none\" stroke=\"");
        s.push_str(stroke);
        s.push('"');
        s.push_str(extra);
        s.push_str(" points=\"");
        let clip = 4.0 * self.size;
        let mut first = true;
        for p in pts {
            let (u, v) = self.map(*p);
            if !(u.is_finite() && v.is_finite()) {
                continue;
            }
            let (u, v) = (u.clamp(-clip, clip), v.clamp(-clip, clip));
            if !first {
                s.push(' ');
            }
            first = false;
            let _ = write!(s, "{u:.3},{v:.3}");
        }
        s.push_str("\"/>\n");
        s
    }
}

/// SHA-256 of the input description, used in the SVG header.
pub fn input_hash(input: &str) -> String {
    hex::encode(Sha256::digest(input.as_bytes()))
}

pub fn render_svg(dom: &IdealDomain, hs: Option<&HorocycleSystem>, scene: &SceneSpec, input: &str) -> String {
    let complex = &dom.complex;
    let finite: Vec<f64> = complex.vertices().iter().filter_map(|v| v.x()).collect();
    let [x_min, x_max, y_max] = scene.viewport.unwrap_or_else(|| {
        let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let pad = 0.1 * (hi - lo).max(1.0);
        [lo - pad, hi + pad, 0.6 * (hi - lo + 2.0 * pad)]
    });
    let frame = Frame {
        chart: scene.chart,
        size: scene.size,
        x_min,
        x_max,
        y_max,
    };
    let (w, h) = (frame.size, frame.height());
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(svg, "<!-- input sha256: {} -->", input_hash(input));
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.3} {h:.3}\">"
    );
    let _ = writeln!(svg, "<rect x=\"0\" y=\"0\" width=\"{w:.3}\" height=\"{h:.3}\" fill=\"white\"/>");
    match scene.chart {
        Chart::Halfplane => {
            let _ = writeln!(
                svg,
                "<line x1=\"0\" y1=\"{h:.3}\" x2=\"{w:.3}\" y2=\"{h:.3}\" stroke=\"black\" stroke-width=\"1\"/>"
            );
        }
        Chart::Disk => {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
                0.5 * w,
                0.5 * h,
                0.48 * w
            );
        }
    }
    svg.push_str("<g id=\"sides\" stroke-width=\"1.5\">\n");
    for e in 0..complex.edges().len() {
        let (stroke, extra) = match complex.boundary_kind(e) {
            Some(SideKind::A) => (scene.a_stroke.as_str(), " class=\"side-a\""),
            Some(SideKind::B) => (scene.b_stroke.as_str(), " class=\"side-b\""),
            None if scene.show_interior => (scene.interior_stroke.as_str(), " class=\"interior\" stroke-dasharray=\"4 3\""),
            None => continue,
        };
        svg.push_str(&frame.polyline(&sample_arc(&complex.edge_arc(e), 256), stroke, extra));
    }
    svg.push_str("</g>\n");
    if let (true, Some(hs)) = (scene.show_horocycles, hs) {
        svg.push_str("<g id=\"horocycles\" stroke-width=\"0.8\">\n");
        for h in hs.entries().iter().flatten() {
            svg.push_str(&frame.polyline(&sample_horocycle(h, 128), &scene.horocycle_stroke, " class=\"horocycle\""));
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}
