//! Standard curved quadrilaterals and their hyperbolic areas.

use serde::{Deserialize, Serialize};

use crate::arcs::{check_h, equidistant_arc, HArc, Side};
use crate::domain::{connectivity_bound, CellComplex, CellId};
use crate::error::{Error, Result};
use crate::hyp2::{BoundaryPoint, HPoint};
use crate::numerics::Quadrature;

/// Side order of a standard cell: A1 = [P4 P1], B1 = [P1 P2], A2 = [P2 P3], B2 = [P3 P4].
pub const STD_SIDE_VERTICES: [(usize, usize); 4] = [(3, 0), (0, 1), (1, 2), (2, 3)];

/// Parameters of the quadrilateral with vertices `0, 2mu, d3, inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadParams {
    pub mu: f64,
    pub d3: f64,
    pub h: f64,
    pub theta: f64,
    pub r_a: f64,
    pub r_b: f64,
    pub d3_star: Option<f64>,
}

impl QuadParams {
    pub fn new(mu: f64, d3: f64, h: f64) -> Result<Self> {
        check_h(h)?;
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParams(format!("mu must be positive, got {mu}")));
        }
        let bound = connectivity_bound(mu, h)?;
        if !(d3.is_finite() && d3 > bound) {
            return Err(Error::InvalidParams(format!(
                "d3 = {d3} must exceed the connectivity bound 2mu/(1-4H^2) = {bound}"
            )));
        }
        let theta = (2.0 * h).asin();
        let cos = theta.cos();
        Ok(Self {
            mu,
            d3,
            h,
            theta,
            r_a: (d3 - 2.0 * mu) / (2.0 * cos),
            r_b: mu / cos,
            d3_star: None,
        })
    }

    pub fn with_d3_star(mut self, d3_star: f64) -> Self {
        self.d3_star = Some(d3_star);
        self
    }

    /// Vertices `P1..P4`.
    pub fn vertices(&self) -> [BoundaryPoint; 4] {
        [
            BoundaryPoint::finite(0.0),
            BoundaryPoint::finite(2.0 * self.mu),
            BoundaryPoint::finite(self.d3),
            BoundaryPoint::INFINITY,
        ]
    }

    /// Sides `A1, B1, A2, B2`, each traversed with the cell on its left.
    pub fn sides(&self) -> [HArc; 4] {
        let v = self.vertices();
        std::array::from_fn(|k| {
            let (s, e) = STD_SIDE_VERTICES[k];
            let bulge = if k % 2 == 0 { Side::Right } else { Side::Left };
            equidistant_arc(v[s], v[e], self.h, bulge).expect("standard sides are valid")
        })
    }

    /// Heights of the tops of the B1 and A2 circles.
    pub fn circle_tops(&self) -> (f64, f64) {
        let s = self.theta.sin();
        (self.r_b * (1.0 + s), self.r_a * (1.0 - s))
    }

    /// Membership in the open quadrilateral.
    pub fn contains(&self, p: HPoint) -> bool {
        let tan = self.theta.tan();
        let s = self.theta.sin();
        let in_strip = p.x > -p.y * tan && p.x < self.d3 - p.y * tan;
        let cb = (self.mu, self.r_b * s);
        let ca = (0.5 * (self.d3 + 2.0 * self.mu), -self.r_a * s);
        let out_b = (p.x - cb.0).hypot(p.y - cb.1) > self.r_b;
        let out_a = (p.x - ca.0).hypot(p.y - ca.1) > self.r_a;
        in_strip && out_b && out_a
    }

    /// A point well inside the cell.
    pub fn interior_point(&self) -> HPoint {
        let y = self.d3;
        HPoint {
            x: 0.5 * self.d3 - y * self.theta.tan(),
            y,
        }
    }
}

/// Horizontal chord width of the circle `(c, cy, R)` at height `y`, zero above it.
fn chord(radius: f64, cy: f64, y: f64) -> f64 {
    let t = radius * radius - (y - cy) * (y - cy);
    if t > 0.0 {
        2.0 * t.sqrt()
    } else {
        0.0
    }
}

/// Hyperbolic area of the standard quadrilateral, integrating horizontal
/// slices `(d3 - w_B(y) - w_A(y)) / y^2`. Below both circle tops the
/// integrand is rewritten so that the O(1/y) parts cancel analytically
/// (using `d3 = w_B(0) + w_A(0)`).
pub fn quad_area(params: &QuadParams, quad: &Quadrature) -> Result<f64> {
    let p = params;
    let s = p.theta.sin();
    let cos = p.theta.cos();
    let tan = p.theta.tan();
    let (cy_b, cy_a) = (p.r_b * s, -p.r_a * s);
    let (w0_b, w0_a) = (2.0 * p.r_b * cos, 2.0 * p.r_a * cos);
    let (top_b, top_a) = p.circle_tops();
    let y_low = top_b.min(top_a);
    let y_high = top_b.max(top_a);

    let near = |y: f64| -> f64 {
        let wb = chord(p.r_b, cy_b, y);
        let wa = chord(p.r_a, cy_a, y);
        // w - w0 = -4 y (y - 2 cy) / (w0 + w)
        let db = -4.0 * y * (y - 2.0 * cy_b) / (w0_b + wb);
        let da = -4.0 * y * (y - 2.0 * cy_a) / (w0_a + wa);
        let cross = w0_b * da - w0_a * db;
        let t = 0.5 * tan * cross / ((w0_b + wb) * (w0_a + wa));
        4.0 / (w0_b + wb) + 4.0 / (w0_a + wa) - 8.0 * t / y
    };
    let far = |y: f64| -> f64 { (p.d3 - chord(p.r_b, cy_b, y) - chord(p.r_a, cy_a, y)) / (y * y) };

    // The chords have square-root endpoints at the circle tops; y = top -/+ u^2
    // makes the integrands smooth there.
    let lower = quad.integrate(|u| 2.0 * u * near(y_low - u * u), 0.0, y_low.sqrt())?;
    let y_mid = 0.5 * (y_low + y_high);
    let half = (y_mid - y_low).sqrt();
    let upper = quad.integrate(|u| 2.0 * u * far(y_low + u * u), 0.0, half)?
        + quad.integrate(|u| 2.0 * u * far(y_high - u * u), 0.0, half)?;
    Ok(lower + upper + p.d3 / y_high)
}

/// Sum of cell areas over a set of distinct cells of a complex.
pub fn union_area(complex: &CellComplex, cells: &[CellId]) -> Result<f64> {
    let mut seen = vec![false; complex.cells().len()];
    let mut total = 0.0;
    for &c in cells {
        let slot = seen
            .get_mut(c)
            .ok_or_else(|| Error::Complex(format!("cell {c} does not exist")))?;
        if *slot {
            return Err(Error::Complex(format!("cell {c} listed twice; cells overlap")));
        }
        *slot = true;
        total += complex.cells()[c].area;
    }
    Ok(total)
}
