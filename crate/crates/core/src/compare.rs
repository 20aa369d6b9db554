//! Printed closed forms of the standard quadrilateral against computed values.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arcs::{arc_horocycle_intersection, truncated_length_quadrature};
use crate::domain::{paper_d3, quad_balance, solve_d3_star, standard_horocycles};
use crate::error::{Error, Result};
use crate::numerics::Quadrature;
use crate::regions::QuadParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub id: String,
    pub formula: String,
    /// `d3` at which both sides are evaluated.
    pub d3: f64,
    pub printed: f64,
    pub computed: f64,
    pub abs_deviation: f64,
    pub rel_deviation: f64,
    pub tolerance: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperComparison {
    pub mu: f64,
    pub h: f64,
    pub r: f64,
    pub d3_root: f64,
    pub d3_printed: f64,
    pub rows: Vec<ComparisonRow>,
    pub max_abs_deviation: f64,
}

impl PaperComparison {
    pub fn row(&self, id: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.id == id)
    }
}

pub const VERDICT_AGREES: &str = "agrees";
pub const VERDICT_DIFFERS: &str = "differs";

fn row(id: &str, formula: &str, d3: f64, printed: f64, computed: f64, tolerance: f64) -> ComparisonRow {
    let abs_deviation = (printed - computed).abs();
    let rel_deviation = if computed != 0.0 { abs_deviation / computed.abs() } else { abs_deviation };
    let ok = abs_deviation <= tolerance * computed.abs().max(1.0);
    ComparisonRow {
        id: id.into(),
        formula: formula.into(),
        d3,
        printed,
        computed,
        abs_deviation,
        rel_deviation,
        tolerance,
        verdict: if ok { VERDICT_AGREES } else { VERDICT_DIFFERS }.into(),
    }
}

/// Evaluates each printed formula next to a value computed from definitions:
/// side lengths by quadrature of the line element, areas by slice
/// quadrature, intersections by the arc/horocycle solver, and the root of
/// the balance function by Brent's method.
pub fn compare_paper(mu: f64, h: f64, r: f64, quad: &Quadrature) -> Result<PaperComparison> {
    if !(r > 0.0 && r < 0.5 * mu) {
        return Err(Error::InvalidParams(format!("r must lie in (0, mu/2), got {r}")));
    }
    let root = solve_d3_star(mu, h, quad)?;
    let printed_d3 = paper_d3(mu, h)?;
    let at_root = QuadParams::new(mu, root, h)?;
    let at_printed = QuadParams::new(mu, printed_d3, h)?;
    let theta = at_root.theta;
    let (sin, cos, tan) = (theta.sin(), theta.cos(), theta.tan());
    let tol = 1e-8;
    let mut rows = Vec::new();

    let m = 2.0 * root;
    let hs = standard_horocycles(&at_root, r, m)?;
    let sides = at_root.sides();
    let a2 = truncated_length_quadrature(&sides[2], &hs[1], &hs[2], quad)?;
    let b1 = truncated_length_quadrature(&sides[1], &hs[0], &hs[1], quad)?;
    let (ra, rb) = (at_root.r_a, at_root.r_b);
    rows.push(row("len_a2", "|A2| = (2/cos t) ln(R_A/r)", root, 2.0 / cos * (ra / r).ln(), a2, tol));
    rows.push(row("len_b1", "|B1| = (2/cos t) ln(R_B/r)", root, 2.0 / cos * (rb / r).ln(), b1, tol));

    let bal_printed = quad_balance(&at_printed, r, 2.0 * printed_d3, quad)?;
    let ratio = (printed_d3 - 2.0 * mu) / (2.0 * mu);
    rows.push(row(
        "area_boxed",
        "A = 2pi - 2 tan t ln((d3 - 2mu)/(2mu))",
        printed_d3,
        2.0 * PI - 2.0 * tan * ratio.ln(),
        bal_printed.area,
        tol,
    ));
    rows.push(row(
        "area_penultimate",
        "A = 2pi - 2 tan t ln(R_B/R_A)",
        printed_d3,
        2.0 * PI - 2.0 * tan * (at_printed.r_b / at_printed.r_a).ln(),
        bal_printed.area,
        tol,
    ));
    rows.push(row(
        "g_at_printed_d3",
        "G = cos t ln((d3 - 2mu)/(2mu)) - 2pi sin t",
        printed_d3,
        cos * ratio.ln() - 2.0 * PI * sin,
        bal_printed.g,
        tol,
    ));
    let bal_root = quad_balance(&at_root, r, m, quad)?;
    rows.push(row(
        "g_at_root",
        "G = cos t ln((d3 - 2mu)/(2mu)) - 2pi sin t",
        root,
        cos * ((root - 2.0 * mu) / (2.0 * mu)).ln() - 2.0 * PI * sin,
        bal_root.g,
        tol,
    ));
    rows.push(row("d3_star", "d3* = 2mu (1 + exp(2pi tan t))", root, printed_d3, root, tol));

    let p0 = arc_horocycle_intersection(&sides[1], &hs[0])?;
    let p1 = arc_horocycle_intersection(&sides[2], &hs[1])?;
    let x0 = 2.0 * r * mu * (r - mu * tan) / (mu * mu / (cos * cos) + r * (r - 2.0 * mu * tan));
    let y0 = 2.0 * r * rb * rb * cos * cos / (rb * rb + r * r - 2.0 * r * rb * sin);
    let (c2, s2) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    let d = root;
    let x1 = (2.0 * (d * d * mu + 4.0 * mu.powi(3) + d * (r * r - 4.0 * mu * mu) + d * r * r * c2)
        + r * s2 * (d * d - 4.0 * mu * mu))
        / (2.0 * r * r + (d - 2.0 * mu).powi(2) + 2.0 * r * (r * c2 + s2 * (d - 2.0 * mu)));
    let y1 = 2.0 * r * ra * ra * cos * cos / (ra * ra + r * r + 2.0 * r * ra * sin);
    rows.push(row("x0", "H1 ∩ B1: x0", root, x0, p0.x, tol));
    rows.push(row("y0", "H1 ∩ B1: y0", root, y0, p0.y, tol));
    rows.push(row("x1", "H2 ∩ A2: x1", root, x1, p1.x, tol));
    rows.push(row("y1", "H2 ∩ A2: y1", root, y1, p1.y, tol));

    let max_abs_deviation = rows.iter().map(|r| r.abs_deviation).fold(0.0, f64::max);
    Ok(PaperComparison {
        mu,
        h,
        r,
        d3_root: root,
        d3_printed: printed_d3,
        rows,
        max_abs_deviation,
    })
}
