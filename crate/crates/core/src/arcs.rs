//! Equidistant arcs between ideal points, horocycles, and truncated lengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyp2::{BoundaryPoint, HPoint, IsometryMap, Transform};
use crate::numerics::{brent_root, Quadrature};

const ENDPOINT_TOL: f64 = 1e-10;

/// Side of an oriented arc, relative to its traversal from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Euclidean picture of an arc: the line `x = x0 + slope * y` or a circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EuclidShape {
    Line { x0: f64, slope: f64 },
    Circle { cx: f64, cy: f64, radius: f64 },
}

/// Arc of constant geodesic curvature `2H` joining two ideal points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HArc {
    pub a: BoundaryPoint,
    pub b: BoundaryPoint,
    pub curv: f64,
    pub bulge: Side,
    pub theta: f64,
    pub euclid: EuclidShape,
}

pub fn check_h(h: f64) -> Result<()> {
    if !(0.0..0.5).contains(&h) {
        return Err(Error::CurvatureOutOfRange(h));
    }
    Ok(())
}

/// The arc from `a` to `b` at constant distance from the geodesic `ab`,
/// displaced towards `bulge`; with `H = 0` both choices give the geodesic.
pub fn equidistant_arc(a: BoundaryPoint, b: BoundaryPoint, h: f64, bulge: Side) -> Result<HArc> {
    check_h(h)?;
    if a.approx_eq(&b, 1e-14) {
        return Err(Error::Degenerate(format!("arc endpoints coincide at {a}")));
    }
    let theta = (2.0 * h).asin();
    let tan = theta.tan();
    let euclid = match (a.x(), b.x()) {
        (Some(c), None) => {
            let slope = if bulge == Side::Left { -tan } else { tan };
            EuclidShape::Line { x0: c, slope }
        }
        (None, Some(c)) => {
            let slope = if bulge == Side::Left { tan } else { -tan };
            EuclidShape::Line { x0: c, slope }
        }
        (Some(xa), Some(xb)) => {
            let m = 0.5 * (xa + xb);
            let radius = 0.5 * (xb - xa).abs() / theta.cos();
            let up = (xa < xb) == (bulge == Side::Left);
            let s = if up { 1.0 } else { -1.0 };
            EuclidShape::Circle {
                cx: m,
                cy: s * radius * (2.0 * h),
                radius,
            }
        }
        (None, None) => unreachable!("distinct boundary points"),
    };
    Ok(HArc {
        a,
        b,
        curv: 2.0 * h,
        bulge,
        theta,
        euclid,
    })
}

/// Normalizes an angle into `(-pi/2, 3pi/2]`, the range covering upper arcs.
fn upper_angle(phi: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    let mut t = phi;
    while t <= -FRAC_PI_2 {
        t += 2.0 * PI;
    }
    while t > 1.5 * PI {
        t -= 2.0 * PI;
    }
    t
}

impl HArc {
    pub fn h(&self) -> f64 {
        0.5 * self.curv
    }

    /// The same point set traversed from `b` to `a`.
    pub fn reversed(&self) -> HArc {
        equidistant_arc(self.b, self.a, self.h(), self.bulge.flip()).expect("valid arc")
    }

    /// The geodesic with the same endpoints.
    pub fn geodesic(&self) -> HArc {
        equidistant_arc(self.a, self.b, 0.0, Side::Left).expect("valid arc")
    }

    /// Circle parameter of an endpoint (angle about the centre).
    fn endpoint_angle(&self, e: &BoundaryPoint) -> f64 {
        match self.euclid {
            EuclidShape::Circle { cx, .. } => {
                let s = self.signed_tilt();
                if e.x().expect("finite endpoint") > cx {
                    -s * self.theta
                } else {
                    std::f64::consts::PI + s * self.theta
                }
            }
            EuclidShape::Line { .. } => unreachable!("angles only for circles"),
        }
    }

    fn signed_tilt(&self) -> f64 {
        match self.euclid {
            EuclidShape::Circle { cy, .. } => {
                if cy >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            EuclidShape::Line { .. } => 0.0,
        }
    }

    /// Parameter range `(t_a, t_b)` in traversal order: angles for circles,
    /// heights for lines (0 at the finite end, infinity at the other).
    pub fn param_range(&self) -> (f64, f64) {
        match self.euclid {
            EuclidShape::Circle { .. } => (self.endpoint_angle(&self.a), self.endpoint_angle(&self.b)),
            EuclidShape::Line { .. } => {
                if self.b.is_infinite() {
                    (0.0, f64::INFINITY)
                } else {
                    (f64::INFINITY, 0.0)
                }
            }
        }
    }

    pub fn point_at(&self, t: f64) -> HPoint {
        match self.euclid {
            EuclidShape::Circle { cx, cy, radius } => HPoint {
                x: cx + radius * t.cos(),
                y: cy + radius * t.sin(),
            },
            EuclidShape::Line { x0, slope } => HPoint { x: x0 + slope * t, y: t },
        }
    }

    pub fn param_of(&self, p: HPoint) -> f64 {
        match self.euclid {
            EuclidShape::Circle { cx, cy, .. } => upper_angle((p.y - cy).atan2(p.x - cx)),
            EuclidShape::Line { .. } => p.y,
        }
    }

    /// Hyperbolic line-element density `ds/dt`.
    pub fn density(&self, t: f64) -> f64 {
        match self.euclid {
            EuclidShape::Circle { cy, radius, .. } => radius / (cy + radius * t.sin()),
            EuclidShape::Line { .. } => 1.0 / (t * self.theta.cos()),
        }
    }

    /// Euclidean distance from `p` to the supporting curve, divided by `p.y`
    /// (first-order hyperbolic displacement).
    pub fn residual(&self, p: HPoint) -> f64 {
        match self.euclid {
            EuclidShape::Circle { cx, cy, radius } => ((p.x - cx).hypot(p.y - cy) - radius).abs() / p.y,
            EuclidShape::Line { x0, slope } => (p.x - x0 - slope * p.y).abs() * self.theta.cos() / p.y,
        }
    }

    /// Which side of the oriented arc the point lies on.
    pub fn side_of(&self, p: HPoint) -> Side {
        match self.euclid {
            EuclidShape::Line { x0, slope } => {
                let less = p.x < x0 + slope * p.y;
                let upward = self.b.is_infinite();
                if less == upward {
                    Side::Left
                } else {
                    Side::Right
                }
            }
            EuclidShape::Circle { cx, cy, radius } => {
                let outside = (p.x - cx).hypot(p.y - cy) > radius;
                let clockwise = self.a.x().unwrap() < self.b.x().unwrap();
                if outside == clockwise {
                    Side::Left
                } else {
                    Side::Right
                }
            }
        }
    }

    /// Points along the arc for interior probes, excluding the endpoints.
    pub fn probe_points(&self, n: usize) -> Vec<HPoint> {
        let (ta, tb) = self.param_range();
        (1..=n)
            .map(|i| {
                let f = i as f64 / (n + 1) as f64;
                match self.euclid {
                    EuclidShape::Circle { .. } => self.point_at(ta + f * (tb - ta)),
                    EuclidShape::Line { x0, .. } => {
                        let scale = x0.abs().max(1.0);
                        let u = (f - 0.5) * 8.0;
                        self.point_at(scale * u.exp())
                    }
                }
            })
            .collect()
    }

    fn endpoint_index(&self, base: &BoundaryPoint) -> Option<usize> {
        if base.approx_eq(&self.a, ENDPOINT_TOL) {
            Some(0)
        } else if base.approx_eq(&self.b, ENDPOINT_TOL) {
            Some(1)
        } else {
            None
        }
    }
}

impl Transform for HArc {
    fn transformed(&self, g: &IsometryMap) -> Self {
        let bulge = if g.reflects() { self.bulge.flip() } else { self.bulge };
        equidistant_arc(g.apply_boundary(self.a), g.apply_boundary(self.b), self.h(), bulge)
            .expect("isometries preserve distinct endpoints")
    }
}

/// Horocycle: circle of Euclidean radius `size` tangent at a finite base,
/// or the line `y = size` for the base at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horocycle {
    pub base: BoundaryPoint,
    pub size: f64,
}

impl Horocycle {
    pub fn new(base: BoundaryPoint, size: f64) -> Result<Self> {
        if !(size.is_finite() && size > 0.0) {
            return Err(Error::Horocycle(format!("size must be positive, got {size}")));
        }
        Ok(Self { base, size })
    }

    /// A point on the horocycle: its top for a finite base, `(0, M)` otherwise.
    pub fn point_on(&self) -> HPoint {
        match self.base.x() {
            Some(x) => HPoint { x, y: 2.0 * self.size },
            None => HPoint { x: 0.0, y: self.size },
        }
    }

    /// Open horodisk membership.
    pub fn contains(&self, p: HPoint) -> bool {
        match self.base.x() {
            Some(x) => (p.x - x).powi(2) + p.y * p.y < 2.0 * self.size * p.y,
            None => p.y > self.size,
        }
    }

    /// The concentric horocycle moved deeper into its cusp by `factor < 1`.
    pub fn shrunk(&self, factor: f64) -> Horocycle {
        match self.base.x() {
            Some(_) => Horocycle { base: self.base, size: self.size * factor },
            None => Horocycle { base: self.base, size: self.size / factor },
        }
    }

    /// Signed hyperbolic distance between two horocycles (negative when the
    /// horodisks overlap): `ln(d^2 / (4 r1 r2))` or `ln(M / (2 r))`.
    pub fn separation(&self, other: &Horocycle) -> f64 {
        match (self.base.x(), other.base.x()) {
            (Some(x1), Some(x2)) => ((x1 - x2).powi(2) / (4.0 * self.size * other.size)).ln(),
            (Some(_), None) => (other.size / (2.0 * self.size)).ln(),
            (None, Some(_)) => (self.size / (2.0 * other.size)).ln(),
            (None, None) => f64::NEG_INFINITY,
        }
    }

    pub fn disjoint(&self, other: &Horocycle) -> bool {
        self.separation(other) > 0.0
    }

    /// Whether `other` lies inside this horodisk (same base, deeper).
    pub fn encloses(&self, other: &Horocycle) -> bool {
        self.base == other.base
            && match self.base.x() {
                Some(_) => other.size <= self.size,
                None => other.size >= self.size,
            }
    }

    /// Horocycle at `base` through the point `p`.
    pub fn through(base: BoundaryPoint, p: HPoint) -> Result<Horocycle> {
        match base.x() {
            Some(b) => Horocycle::new(base, ((p.x - b).powi(2) + p.y * p.y) / (2.0 * p.y)),
            None => Horocycle::new(base, p.y),
        }
    }
}

impl Transform for Horocycle {
    fn transformed(&self, g: &IsometryMap) -> Self {
        let base = g.apply_boundary(self.base);
        Horocycle::through(base, g.apply_point(self.point_on())).expect("positive size")
    }
}

/// Second intersection of `arc` with a horocycle based at one of its endpoints.
pub fn arc_horocycle_intersection(arc: &HArc, h: &Horocycle) -> Result<HPoint> {
    let idx = arc.endpoint_index(&h.base).ok_or_else(|| {
        Error::Horocycle(format!("horocycle base {} is not an endpoint of the arc", h.base))
    })?;
    let e = if idx == 0 { arc.a } else { arc.b };
    match (arc.euclid, e.x()) {
        (EuclidShape::Line { x0, slope }, Some(_)) => {
            let y = 2.0 * h.size / (1.0 + slope * slope);
            Ok(HPoint { x: x0 + slope * y, y })
        }
        (EuclidShape::Line { x0, slope }, None) => Ok(HPoint { x: x0 + slope * h.size, y: h.size }),
        (EuclidShape::Circle { cx, cy, radius }, Some(ex)) => {
            // In coordinates X = x - e both circles pass through the origin:
            // X^2 + y^2 = 2 r y and X^2 + y^2 = 2 X (cx - e) + 2 y cy.
            let dx = cx - ex;
            let r = h.size;
            if dx * dx < 1e-12 * radius.max(r).powi(2) {
                return intersection_by_search(arc, h, idx);
            }
            let k = (r - cy) / dx;
            let y = 2.0 * r / (1.0 + k * k);
            if !(y > 0.0) {
                return Err(Error::Horocycle("tangential arc/horocycle configuration".into()));
            }
            Ok(HPoint { x: ex + k * y, y })
        }
        (EuclidShape::Circle { .. }, None) => Err(Error::Horocycle(
            "circle arcs have no endpoint at infinity".into(),
        )),
    }
}

/// Safeguarded root search along the arc parameter, starting from the
/// endpoint where the horocycle is based.
pub(crate) fn intersection_by_search(arc: &HArc, h: &Horocycle, idx: usize) -> Result<HPoint> {
    let (ta, tb) = arc.param_range();
    let (start, end) = if idx == 0 { (ta, tb) } else { (tb, ta) };
    let (start, end) = match arc.euclid {
        EuclidShape::Circle { .. } => (start, end),
        EuclidShape::Line { .. } => {
            return arc_horocycle_intersection(arc, h);
        }
    };
    let f = |t: f64| -> f64 {
        let p = arc.point_at(t);
        let c = h.point_on();
        let r = h.size;
        ((p.x - c.x).powi(2) + (p.y - r).powi(2) - r * r) / p.y.max(f64::MIN_POSITIVE)
    };
    let n = 4096;
    let mut prev_t = start;
    let mut prev_f = None;
    for i in 1..n {
        let t = start + (end - start) * (i as f64 / n as f64).powi(3);
        let v = f(t);
        if let Some(pf) = prev_f {
            if pf < 0.0 && v >= 0.0 {
                let root = brent_root(f, prev_t, t, 1e-15, 200)?;
                return Ok(arc.point_at(root));
            }
        }
        prev_f = Some(v);
        prev_t = t;
    }
    Err(Error::Horocycle("no transversal intersection found along the arc".into()))
}

/// Signed position of the perpendicular foot of `p` on the geodesic from `a`
/// to `b`, in arc length from an arbitrary origin.
pub fn foot_coordinate(a: &BoundaryPoint, b: &BoundaryPoint, p: HPoint) -> f64 {
    let d = |e: &BoundaryPoint| (p.x - e.x().expect("finite endpoint")).hypot(p.y).ln();
    match (a.is_infinite(), b.is_infinite()) {
        (true, _) => -d(b),
        (_, true) => d(a),
        _ => d(a) - d(b),
    }
}

fn ordered_horocycles<'h>(arc: &HArc, h1: &'h Horocycle, h2: &'h Horocycle) -> Result<(&'h Horocycle, &'h Horocycle)> {
    match (arc.endpoint_index(&h1.base), arc.endpoint_index(&h2.base)) {
        (Some(0), Some(1)) => Ok((h1, h2)),
        (Some(1), Some(0)) => Ok((h2, h1)),
        _ => Err(Error::Horocycle(format!(
            "horocycles at {} and {} do not sit at the arc endpoints {} and {}",
            h1.base, h2.base, arc.a, arc.b
        ))),
    }
}

/// Endpoints `(left, right)` of the geodesic perpendicular to the geodesic
/// `a -> b` at foot coordinate `s`, sides taken relative to the traversal.
pub fn perpendicular_at(a: &BoundaryPoint, b: &BoundaryPoint, s: f64) -> Result<(BoundaryPoint, BoundaryPoint)> {
    let e = s.exp();
    match (a.x(), b.x()) {
        (None, Some(b)) => Ok((BoundaryPoint::finite(b + 1.0 / e), BoundaryPoint::finite(b - 1.0 / e))),
        (Some(a), None) => Ok((BoundaryPoint::finite(a - e), BoundaryPoint::finite(a + e))),
        (Some(a), Some(b)) if a != b => {
            // w = sg (z - a) / (b - z) sends the geodesic to the upward imaginary axis
            let sg = (b - a).signum();
            let end = |w: f64| BoundaryPoint::new(w * b + sg * a, w + sg);
            Ok((end(-e)?, end(e)?))
        }
        _ => Err(Error::Degenerate("geodesic endpoints coincide".into())),
    }
}

/// Hyperbolic length of the part of `arc` outside the two horodisks at its
/// endpoints; the horocycles may be given in either order.
///
/// An equidistant arc at distance `δ` from its geodesic has length
/// `cosh δ = 1 / cos θ` times that of its projection, so the length is
/// exact once the two horocycle crossings are known.
pub fn truncated_length(arc: &HArc, h1: &Horocycle, h2: &Horocycle) -> Result<f64> {
    let (ha, hb) = ordered_horocycles(arc, h1, h2)?;
    let pa = arc_horocycle_intersection(arc, ha)?;
    let pb = arc_horocycle_intersection(arc, hb)?;
    let span = foot_coordinate(&arc.a, &arc.b, pb) - foot_coordinate(&arc.a, &arc.b, pa);
    if !(span > 0.0) {
        return Err(Error::Horocycle(
            "horodisks overlap along the arc; truncated arc is empty".into(),
        ));
    }
    Ok(span / arc.theta.cos())
}

/// The same length by adaptive quadrature of the line element.
pub fn truncated_length_quadrature(arc: &HArc, h1: &Horocycle, h2: &Horocycle, quad: &Quadrature) -> Result<f64> {
    let (ha, hb) = ordered_horocycles(arc, h1, h2)?;
    let pa = arc_horocycle_intersection(arc, ha)?;
    let pb = arc_horocycle_intersection(arc, hb)?;
    let (ta, tb) = (arc.param_of(pa), arc.param_of(pb));
    let (ea, eb) = arc.param_range();
    let dir = if eb > ea { 1.0 } else { -1.0 };
    if !((tb - ta) * dir > 0.0) {
        return Err(Error::Horocycle(
            "horodisks overlap along the arc; truncated arc is empty".into(),
        ));
    }
    let (lo, hi) = if ta < tb { (ta, tb) } else { (tb, ta) };
    quad.integrate(|t| arc.density(t), lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(x: f64) -> BoundaryPoint {
        BoundaryPoint::finite(x)
    }

    #[test]
    fn line_arcs_follow_bulge_convention() {
        let h = 0.25;
        let tan = (0.5f64).asin().tan();
        let up = equidistant_arc(bp(0.0), BoundaryPoint::INFINITY, h, Side::Left).unwrap();
        assert_eq!(up.euclid, EuclidShape::Line { x0: 0.0, slope: -tan });
        let down = equidistant_arc(BoundaryPoint::INFINITY, bp(0.0), h, Side::Right).unwrap();
        assert_eq!(down.euclid, EuclidShape::Line { x0: 0.0, slope: -tan });
        assert!(equidistant_arc(bp(1.0), bp(1.0), h, Side::Left).is_err());
        assert!(equidistant_arc(bp(0.0), bp(1.0), 0.5, Side::Left).is_err());
    }

    #[test]
    fn geodesic_semicircle_for_zero_curvature() {
        let l = equidistant_arc(bp(-1.0), bp(1.0), 0.0, Side::Left).unwrap();
        let r = equidistant_arc(bp(-1.0), bp(1.0), 0.0, Side::Right).unwrap();
        assert_eq!(l.euclid, r.euclid);
        match l.euclid {
            EuclidShape::Circle { cx, cy, radius } => {
                assert_eq!((cx, radius), (0.0, 1.0));
                assert!(cy.abs() < 1e-300);
            }
            _ => panic!("expected a circle"),
        }
    }

    #[test]
    fn side_of_matches_bulge() {
        for (a, b) in [(bp(0.0), bp(3.0)), (bp(3.0), bp(0.0)), (bp(1.0), BoundaryPoint::INFINITY), (BoundaryPoint::INFINITY, bp(1.0))] {
            let g = equidistant_arc(a, b, 0.0, Side::Left).unwrap();
            for bulge in [Side::Left, Side::Right] {
                let arc = equidistant_arc(a, b, 0.3, bulge).unwrap();
                for p in arc.probe_points(3) {
                    assert_eq!(g.side_of(p), bulge);
                    assert!(arc.residual(p) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn vertical_geodesic_length() {
        let arc = equidistant_arc(bp(0.0), BoundaryPoint::INFINITY, 0.0, Side::Left).unwrap();
        let h0 = Horocycle::new(bp(0.0), 0.05).unwrap();
        let hinf = Horocycle::new(BoundaryPoint::INFINITY, 7.0).unwrap();
        let p = arc_horocycle_intersection(&arc, &hinf).unwrap();
        assert_eq!((p.x, p.y), (0.0, 7.0));
        let l = truncated_length(&arc, &hinf, &h0).unwrap();
        assert!((l - (7.0f64 / 0.1).ln()).abs() < 1e-12);
        let q = truncated_length_quadrature(&arc, &hinf, &h0, &Quadrature::default()).unwrap();
        assert!((l - q).abs() < 1e-10);
    }

    #[test]
    fn search_fallback_agrees_with_closed_form() {
        let arc = equidistant_arc(bp(0.0), bp(2.0), 0.25, Side::Left).unwrap();
        let h = Horocycle::new(bp(0.0), 0.05).unwrap();
        let p = arc_horocycle_intersection(&arc, &h).unwrap();
        let q = intersection_by_search(&arc, &h, 0).unwrap();
        assert!((p.x - q.x).abs() < 1e-12 && (p.y - q.y).abs() < 1e-12);
        assert!(arc.residual(p) < 1e-10);
    }

    #[test]
    fn closed_form_length_matches_quadrature_on_circles() {
        let quad = Quadrature::default();
        for (a, b, bulge) in [(0.0, 2.0, Side::Left), (2.0, 0.0, Side::Left), (-1.0, 3.0, Side::Right)] {
            let arc = equidistant_arc(bp(a), bp(b), 0.3, bulge).unwrap();
            let ha = Horocycle::new(bp(a), 0.1).unwrap();
            let hb = Horocycle::new(bp(b), 0.2).unwrap();
            let l = truncated_length(&arc, &ha, &hb).unwrap();
            let q = truncated_length_quadrature(&arc, &hb, &ha, &quad).unwrap();
            assert!((l - q).abs() < 1e-9, "{l} vs {q}");
        }
    }

    #[test]
    fn perpendiculars_cross_at_the_requested_foot() {
        for (a, b) in [(bp(0.0), bp(3.0)), (bp(3.0), bp(-1.0)), (bp(1.0), BoundaryPoint::INFINITY), (BoundaryPoint::INFINITY, bp(1.0))] {
            let g = equidistant_arc(a, b, 0.0, Side::Left).unwrap();
            for s in [-1.5, 0.0, 0.7] {
                let (l, r) = perpendicular_at(&a, &b, s).unwrap();
                let perp = equidistant_arc(r, l, 0.0, Side::Left).unwrap();
                // the perpendicular is a level set of the foot coordinate
                for p in perp.probe_points(7) {
                    assert!((foot_coordinate(&a, &b, p) - s).abs() < 1e-9);
                }
                let near_l = match perp.euclid {
                    EuclidShape::Circle { .. } => {
                        let (ta, tb) = perp.param_range();
                        perp.point_at(ta + 0.9999 * (tb - ta))
                    }
                    EuclidShape::Line { .. } if l.is_infinite() => perp.point_at(1e8),
                    EuclidShape::Line { .. } => perp.point_at(1e-8),
                };
                assert_eq!(g.side_of(near_l), Side::Left);
            }
        }
    }

    #[test]
    fn overlapping_horodisks_give_empty_truncation() {
        let arc = equidistant_arc(bp(0.0), bp(1.0), 0.1, Side::Left).unwrap();
        let h0 = Horocycle::new(bp(0.0), 2.0).unwrap();
        let h1 = Horocycle::new(bp(1.0), 2.0).unwrap();
        assert!(truncated_length(&arc, &h0, &h1).is_err());
        assert!(truncated_length_quadrature(&arc, &h0, &h1, &Quadrature::default()).is_err());
    }

    #[test]
    fn horocycle_translation() {
        let h = Horocycle::new(bp(0.0), 0.3).unwrap();
        let g = IsometryMap::translation(2.5);
        let hh = g.apply(&h);
        assert_eq!(hh.base, bp(2.5));
        assert!((hh.size - 0.3).abs() < 1e-15);
    }
}
