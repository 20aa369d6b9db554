//! The balance function of the standard quadrilateral and its root.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::complex::{CellComplex, IdealDomain};
use super::horocycles::{default_std_sizes, standard_horocycles, HorocycleSystem};
use crate::arcs::{check_h, truncated_length};
use crate::error::{Error, Result};
use crate::hyp2::IsometryMap;
use crate::numerics::{brent_root, Quadrature};
use crate::regions::{quad_area, QuadParams};

/// `2mu / (1 - 4H^2)`: the quadrilateral is connected beyond this `d3`.
pub fn connectivity_bound(mu: f64, h: f64) -> Result<f64> {
    check_h(h)?;
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParams(format!("mu must be positive, got {mu}")));
    }
    Ok(2.0 * mu / (1.0 - 4.0 * h * h))
}

/// Discriminant of `y^2 sec^2(t) - 2 d3 tan(t) y + d3^2 - 2 mu d3 = 0`, the
/// intersection of the B1 circle with the B2 line.
pub fn connectivity_discriminant(mu: f64, h: f64, d3: f64) -> Result<f64> {
    check_h(h)?;
    let theta = (2.0 * h).asin();
    let (tan, cos) = (theta.tan(), theta.cos());
    let a = 1.0 / (cos * cos);
    let b = -2.0 * d3 * tan;
    let c = d3 * d3 - 2.0 * mu * d3;
    Ok(b * b - 4.0 * a * c)
}

/// `(1 - 4H^2)(1 + exp(4 pi H / sqrt(1 - 4H^2)))`.
pub fn xi(h: f64) -> Result<f64> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::CurvatureOutOfRange(h));
    }
    let c = 1.0 - 4.0 * h * h;
    Ok(c * (1.0 + (4.0 * PI * h / c.sqrt()).exp()))
}

/// The printed closed-form root `2mu(1 + exp(2 pi tan(theta)))`.
pub fn paper_d3(mu: f64, h: f64) -> Result<f64> {
    check_h(h)?;
    let theta = (2.0 * h).asin();
    Ok(2.0 * mu * (1.0 + (2.0 * PI * theta.tan()).exp()))
}

/// Measures of the standard quadrilateral's boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadBalance {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub area: f64,
    pub g: f64,
}

/// Side lengths (radius `r` horocycles at finite vertices, height `m` at
/// infinity), area, and `G = α - β - 2H𝒜`.
pub fn quad_balance(params: &QuadParams, r: f64, m: f64, quad: &Quadrature) -> Result<QuadBalance> {
    let hs = standard_horocycles(params, r, m)?;
    let sides = params.sides();
    let ends = [(3, 0), (0, 1), (1, 2), (2, 3)];
    let mut len = [0.0; 4];
    for k in 0..4 {
        len[k] = truncated_length(&sides[k], &hs[ends[k].0], &hs[ends[k].1])?;
    }
    let area = quad_area(params, quad)?;
    let g = (len[0] + len[2]) - (len[1] + len[3]) - 2.0 * params.h * area;
    Ok(QuadBalance {
        a1: len[0],
        b1: len[1],
        a2: len[2],
        b2: len[3],
        area,
        g,
    })
}

/// `G(mu, d3, H)` with default horocycles.
pub fn balance_g(mu: f64, d3: f64, h: f64, quad: &Quadrature) -> Result<f64> {
    let p = QuadParams::new(mu, d3, h)?;
    let (r, m) = default_std_sizes(&p);
    Ok(quad_balance(&p, r, m, quad)?.g)
}

/// Solves `G(mu, d3, H) = target` for `d3` on `(lo, hi)`, expanding `hi`
/// geometrically until the bracket shows a sign change.
pub fn solve_d3_for_balance(mu: f64, h: f64, target: f64, lo: f64, hi: f64, quad: &Quadrature) -> Result<f64> {
    let f = |d: f64| balance_g(mu, d, h, quad).map(|g| g - target);
    let f_lo = f(lo)?;
    if f_lo > 0.0 {
        return Err(Error::RootFinding(format!(
            "G - target is already positive ({f_lo:e}) at the lower end d3 = {lo}"
        )));
    }
    let mut hi = hi;
    let mut f_hi = f(hi)?;
    let mut expansions = 0;
    while f_hi < 0.0 {
        expansions += 1;
        if expansions > 60 {
            return Err(Error::RootFinding("no sign change found while expanding the bracket".into()));
        }
        hi *= 2.0;
        f_hi = f(hi)?;
    }
    let err = std::cell::Cell::new(None);
    let root = brent_root(
        |d| match f(d) {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                f64::NAN
            }
        },
        lo,
        hi,
        1e-14 * hi,
        300,
    );
    if let Some(e) = err.take() {
        return Err(e);
    }
    root
}

/// Lower end of the admissible `d3` range used for bracketing.
pub fn bracket_floor(mu: f64, h: f64) -> Result<f64> {
    let b = connectivity_bound(mu, h)?;
    Ok(if h == 0.0 { b * (1.0 + 1e-3) } else { b * (1.0 + 1e-9) })
}

/// The `d3` at which the standard quadrilateral is balanced (`G = 0`).
pub fn solve_d3_star(mu: f64, h: f64, quad: &Quadrature) -> Result<f64> {
    let lo = bracket_floor(mu, h)?;
    solve_d3_for_balance(mu, h, 0.0, lo, 2.0 * lo, quad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum D3Mode {
    ComputedRoot,
    PaperFormula,
}

/// The quadrilateral with vertices `0, 2mu, d3, inf`, where `d3` is the
/// computed root of `G` or the printed formula.
pub fn standard_quadrilateral(mu: f64, h: f64, mode: D3Mode, quad: &Quadrature) -> Result<IdealDomain> {
    let d3 = match mode {
        D3Mode::ComputedRoot => solve_d3_star(mu, h, quad)?,
        D3Mode::PaperFormula => paper_d3(mu, h)?,
    };
    let mut params = QuadParams::new(mu, d3, h)?;
    if mode == D3Mode::ComputedRoot {
        params = params.with_d3_star(d3);
    }
    quadrilateral_domain(params, quad)
}

pub fn quadrilateral_domain(params: QuadParams, quad: &Quadrature) -> Result<IdealDomain> {
    IdealDomain::new(CellComplex::single(params, IsometryMap::IDENTITY, quad)?)
}

/// Horocycles on a single standard cell.
pub fn standard_horocycle_system(params: &QuadParams, r: f64, m: f64) -> Result<HorocycleSystem> {
    let hs = standard_horocycles(params, r, m)?;
    Ok(HorocycleSystem::from_vec(hs.iter().map(|h| Some(*h)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_and_discriminant() {
        assert_eq!(connectivity_bound(1.0, 0.0).unwrap(), 2.0);
        assert!((connectivity_bound(1.0, 0.25).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert!(connectivity_bound(1.0, 0.5).is_err());
        let d = connectivity_discriminant(1.0, 0.25, 8.0 / 3.0).unwrap();
        assert!(d.abs() < 1e-10, "{d}");
        assert!(connectivity_discriminant(1.0, 0.25, 3.0).unwrap() < 0.0);
    }

    #[test]
    fn geodesic_root_is_four_mu() {
        let q = Quadrature::default();
        for mu in [0.5, 1.0, 3.0] {
            let d = solve_d3_star(mu, 0.0, &q).unwrap();
            assert!((d - 4.0 * mu).abs() < 1e-8 * mu, "{d}");
        }
    }

    #[test]
    fn root_matches_corrected_closed_form() {
        let q = Quadrature::default();
        let d = solve_d3_star(1.0, 0.25, &q).unwrap();
        let theta = (0.5f64).asin();
        let expected = 2.0 * (1.0 + (PI * theta.tan()).exp());
        assert!((d - expected).abs() < 1e-8, "{d} vs {expected}");
    }
}
