//! Upper half-plane model: points, distance, ideal points and isometries.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the upper half-plane (y > 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::NotInHalfPlane { x, y });
        }
        Ok(Self { x, y })
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Hyperbolic distance `2 asinh(|p - q| / (2 sqrt(y_p y_q)))`.
pub fn dist(p: HPoint, q: HPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let s = (dx * dx + dy * dy).sqrt() / (2.0 * (p.y * q.y).sqrt());
    2.0 * s.asinh()
}

/// Distance on raw coordinates; rejects points off the half-plane.
pub fn dist_xy(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<f64> {
    Ok(dist(HPoint::new(x1, y1)?, HPoint::new(x2, y2)?))
}

/// A point of the ideal boundary, stored as a canonical homogeneous pair:
/// `(x, 1)` for a finite point and `(1, 0)` for infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    p: f64,
    q: f64,
}

impl BoundaryPoint {
    pub const INFINITY: BoundaryPoint = BoundaryPoint { p: 1.0, q: 0.0 };

    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite()) || (p == 0.0 && q == 0.0) {
            return Err(Error::InvalidBoundaryPoint { p, q });
        }
        if q == 0.0 {
            return Ok(Self::INFINITY);
        }
        let x = p / q;
        if !x.is_finite() {
            return Ok(Self::INFINITY);
        }
        Ok(Self { p: x, q: 1.0 })
    }

    pub fn finite(x: f64) -> Self {
        assert!(x.is_finite(), "finite boundary point requires a finite coordinate");
        Self { p: x, q: 1.0 }
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0.0
    }

    /// Finite coordinate, or `None` for the point at infinity.
    pub fn x(&self) -> Option<f64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.p)
        }
    }

    pub fn homogeneous(&self) -> (f64, f64) {
        (self.p, self.q)
    }

    /// Chordal distance on the boundary circle; infinity is at distance 1 from 0.
    pub fn chordal(&self, other: &BoundaryPoint) -> f64 {
        let num = (self.p * other.q - other.p * self.q).abs();
        num / (self.p.hypot(self.q) * other.p.hypot(other.q))
    }

    pub fn approx_eq(&self, other: &BoundaryPoint, tol: f64) -> bool {
        self.chordal(other) <= tol
    }

    /// Lexicographic order with finite points by coordinate and infinity last.
    pub fn lex_cmp(&self, other: &BoundaryPoint) -> Ordering {
        match (self.x(), other.x()) {
            (Some(a), Some(b)) => a.total_cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.x() {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "inf"),
        }
    }
}

/// Objects the isometry group acts on.
pub trait Transform {
    fn transformed(&self, g: &IsometryMap) -> Self;
}

/// An isometry `z -> m(R^s z)` where `m` is a real Möbius matrix of
/// determinant 1 and `R(z) = -conj(z)` is applied when `reflect` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryMap {
    m: [f64; 4],
    reflect: bool,
}

impl IsometryMap {
    pub const IDENTITY: IsometryMap = IsometryMap {
        m: [1.0, 0.0, 0.0, 1.0],
        reflect: false,
    };

    /// Builds `z -> (a w + b) / (c w + d)` with `w = z` or `w = -conj(z)`;
    /// requires `ad - bc > 0` and rescales to determinant 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64, reflect: bool) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.is_finite() && det > 0.0) {
            return Err(Error::Orientation(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] must have positive determinant"
            )));
        }
        let s = det.sqrt();
        Ok(Self {
            m: [a / s, b / s, c / s, d / s],
            reflect,
        })
    }

    pub fn translation(t: f64) -> Self {
        Self {
            m: [1.0, t, 0.0, 1.0],
            reflect: false,
        }
    }

    pub fn dilation(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Degenerate(format!("dilation factor {k}")));
        }
        Self::new(k, 0.0, 0.0, 1.0, false)
    }

    /// The reflection `x -> -x`.
    pub fn reflection() -> Self {
        Self {
            m: [1.0, 0.0, 0.0, 1.0],
            reflect: true,
        }
    }

    pub fn matrix(&self) -> [f64; 4] {
        self.m
    }

    pub fn reflects(&self) -> bool {
        self.reflect
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &IsometryMap) -> IsometryMap {
        let [a2, mut b2, mut c2, d2] = other.m;
        if self.reflect {
            b2 = -b2;
            c2 = -c2;
        }
        let [a1, b1, c1, d1] = self.m;
        let a = a1 * a2 + b1 * c2;
        let b = a1 * b2 + b1 * d2;
        let c = c1 * a2 + d1 * c2;
        let d = c1 * b2 + d1 * d2;
        let s = (a * d - b * c).sqrt();
        IsometryMap {
            m: [a / s, b / s, c / s, d / s],
            reflect: self.reflect ^ other.reflect,
        }
    }

    pub fn inverse(&self) -> IsometryMap {
        let [a, b, c, d] = self.m;
        let (mut b, mut c) = (-b, -c);
        if self.reflect {
            b = -b;
            c = -c;
        }
        IsometryMap {
            m: [d, b, c, a],
            reflect: self.reflect,
        }
    }

    pub fn apply_point(&self, z: HPoint) -> HPoint {
        let [a, b, c, d] = self.m;
        let x = if self.reflect { -z.x } else { z.x };
        let y = z.y;
        let re = c * x + d;
        let im = c * y;
        let den = re * re + im * im;
        let nx = (a * x + b) * re + a * y * im;
        let det = a * d - b * c;
        HPoint {
            x: nx / den,
            y: det * y / den,
        }
    }

    pub fn apply_boundary(&self, w: BoundaryPoint) -> BoundaryPoint {
        let [a, b, c, d] = self.m;
        let (mut p, q) = w.homogeneous();
        if self.reflect {
            p = -p;
        }
        let np = a * p + b * q;
        let nq = c * p + d * q;
        // Snap a denominator that vanishes up to rounding onto infinity.
        let bound = 4.0 * f64::EPSILON * ((c * p).abs() + (d * q).abs());
        if nq.abs() <= bound {
            return BoundaryPoint::INFINITY;
        }
        BoundaryPoint::new(np, nq).unwrap_or(BoundaryPoint::INFINITY)
    }

    pub fn apply<T: Transform>(&self, obj: &T) -> T {
        obj.transformed(self)
    }

    /// Maximum entrywise difference to another map (same orientation class),
    /// modulo the overall sign of the matrix.
    pub fn distance(&self, other: &IsometryMap) -> f64 {
        if self.reflect != other.reflect {
            return f64::INFINITY;
        }
        let plus = (0..4).map(|i| (self.m[i] - other.m[i]).abs()).fold(0.0, f64::max);
        let minus = (0..4).map(|i| (self.m[i] + other.m[i]).abs()).fold(0.0, f64::max);
        plus.min(minus)
    }
}

impl Transform for HPoint {
    fn transformed(&self, g: &IsometryMap) -> Self {
        g.apply_point(*self)
    }
}

impl Transform for BoundaryPoint {
    fn transformed(&self, g: &IsometryMap) -> Self {
        g.apply_boundary(*self)
    }
}

/// Rows of the projective map sending `z1 -> 0`, `z2 -> 1`, `z3 -> infinity`.
fn cross_ratio_matrix(z: &[BoundaryPoint; 3]) -> [f64; 4] {
    let (p1, q1) = z[0].homogeneous();
    let (p2, q2) = z[1].homogeneous();
    let (p3, q3) = z[2].homogeneous();
    let k1 = q3 * p2 - p3 * q2;
    let k3 = q1 * p2 - p1 * q2;
    [k1 * q1, -k1 * p1, k3 * q3, -k3 * p3]
}

fn check_distinct(z: &[BoundaryPoint; 3], what: &str) -> Result<()> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if z[i].approx_eq(&z[j], 1e-14) {
                return Err(Error::Degenerate(format!(
                    "{what} triple has repeated points {} and {}",
                    z[i], z[j]
                )));
            }
        }
    }
    Ok(())
}

/// The isometry sending `src[i] -> dst[i]`; orientation-reversing when `reflect`.
/// Fails when the two triples have incompatible cyclic orders for that class.
pub fn map_from_boundary_triple(
    src: [BoundaryPoint; 3],
    dst: [BoundaryPoint; 3],
    reflect: bool,
) -> Result<IsometryMap> {
    check_distinct(&src, "source")?;
    check_distinct(&dst, "target")?;
    let pre = if reflect {
        src.map(|z| IsometryMap::reflection().apply_boundary(z))
    } else {
        src
    };
    let [a1, b1, c1, d1] = cross_ratio_matrix(&pre);
    let [a2, b2, c2, d2] = cross_ratio_matrix(&dst);
    // adj(T_dst) * T_src
    let (ia, ib, ic, id) = (d2, -b2, -c2, a2);
    let a = ia * a1 + ib * c1;
    let b = ia * b1 + ib * d1;
    let c = ic * a1 + id * c1;
    let d = ic * b1 + id * d1;
    let det = a * d - b * c;
    if !(det > 0.0) {
        return Err(Error::Orientation(format!(
            "triples have opposite cyclic order for reflect = {reflect}"
        )));
    }
    IsometryMap::new(a, b, c, d, reflect)
}
