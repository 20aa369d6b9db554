//! Horocycle systems: one horocycle per vertex of a complex.

use serde::{Deserialize, Serialize};

use super::complex::{CellComplex, VertexId};
use crate::arcs::Horocycle;
use crate::error::{Error, Result};
use crate::hyp2::{IsometryMap, Transform};
use crate::regions::QuadParams;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HorocycleSystem {
    entries: Vec<Option<Horocycle>>,
}

impl HorocycleSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vec(entries: Vec<Option<Horocycle>>) -> Self {
        Self { entries }
    }

    pub fn get(&self, v: VertexId) -> Option<&Horocycle> {
        self.entries.get(v).and_then(|h| h.as_ref())
    }

    pub fn set(&mut self, v: VertexId, h: Horocycle) {
        if self.entries.len() <= v {
            self.entries.resize(v + 1, None);
        }
        self.entries[v] = Some(h);
    }

    pub fn entries(&self) -> &[Option<Horocycle>] {
        &self.entries
    }

    pub fn require(&self, v: VertexId) -> Result<&Horocycle> {
        self.get(v)
            .ok_or_else(|| Error::Horocycle(format!("vertex {v} has no horocycle")))
    }

    /// Every horocycle moved deeper into its cusp by `factor`.
    pub fn shrunk(&self, factor: f64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|h| h.map(|h| h.shrunk(factor)))
                .collect(),
        }
    }

    pub fn transformed(&self, g: &IsometryMap) -> Self {
        Self {
            entries: self.entries.iter().map(|h| h.map(|h| h.transformed(g))).collect(),
        }
    }

    /// Smallest pairwise separation (hyperbolic distance between horocycles).
    pub fn min_separation(&self) -> f64 {
        let hs: Vec<&Horocycle> = self.entries.iter().flatten().collect();
        let mut best = f64::INFINITY;
        for i in 0..hs.len() {
            for j in (i + 1)..hs.len() {
                best = best.min(hs[i].separation(hs[j]));
            }
        }
        best
    }

    /// Whether `h` is disjoint from every horocycle of the system.
    pub fn is_disjoint_from(&self, h: &Horocycle) -> bool {
        self.entries.iter().flatten().all(|o| o.disjoint(h))
    }

    /// Checks coverage of every vertex, base positions, and disjointness.
    pub fn validate(&self, complex: &CellComplex) -> Result<()> {
        for (v, p) in complex.vertices().iter().enumerate() {
            let h = self.require(v)?;
            if !h.base.approx_eq(p, 1e-9) {
                return Err(Error::Horocycle(format!(
                    "horocycle of vertex {v} is based at {} instead of {p}",
                    h.base
                )));
            }
        }
        let n = complex.vertices().len();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (self.require(i)?, self.require(j)?);
                if !a.disjoint(b) {
                    return Err(Error::Horocycle(format!(
                        "horocycles at vertices {i} and {j} overlap"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Default standard-chart horocycle sizes `(r, M)` for a cell.
pub fn default_std_sizes(params: &QuadParams) -> (f64, f64) {
    let r = 0.125 * params.mu.min(params.d3 - 2.0 * params.mu);
    (r, 2.0 * params.d3)
}

/// Horocycles at `P1..P4` of the standard chart: radius `r` at the finite
/// vertices and height `m` at infinity.
pub fn standard_horocycles(params: &QuadParams, r: f64, m: f64) -> Result<[Horocycle; 4]> {
    let v = params.vertices();
    let hs = [
        Horocycle::new(v[0], r)?,
        Horocycle::new(v[1], r)?,
        Horocycle::new(v[2], r)?,
        Horocycle::new(v[3], m)?,
    ];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if !hs[i].disjoint(&hs[j]) {
                return Err(Error::Horocycle(format!(
                    "standard horocycles (r = {r}, M = {m}) overlap at P{} and P{}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(hs)
}
