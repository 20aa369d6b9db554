//! Truncated side lengths, areas, and the measures α, β, l, 𝒜 of polygons.

use std::cell::OnceCell;

use serde::{Deserialize, Serialize};

use super::complex::{CellComplex, CellId, EdgeId, SideKind};
use super::horocycles::HorocycleSystem;
use crate::arcs::{truncated_length, Horocycle};
use crate::error::{Error, Result};
use crate::hyp2::{HPoint, Transform};
use crate::regions::STD_SIDE_VERTICES;

/// Type of a polygon side relative to the ambient complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SideRole {
    A,
    B,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonSide {
    pub edge: EdgeId,
    pub role: SideRole,
}

/// Boundary of a union of cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPolygon {
    pub id: String,
    pub label: String,
    pub blocks: Vec<usize>,
    pub cells: Vec<CellId>,
    pub sides: Vec<PolygonSide>,
    pub outer: bool,
}

impl BoundaryPolygon {
    /// The boundary of the union of `cells`.
    pub fn from_cells(complex: &CellComplex, cells: &[CellId], id: String, label: String, blocks: Vec<usize>) -> Self {
        let mut inside = vec![false; complex.cells().len()];
        for &c in cells {
            inside[c] = true;
        }
        let sides = polygon_sides(complex, &inside);
        let outer = inside.iter().all(|&b| b);
        let mut cells = cells.to_vec();
        cells.sort_unstable();
        Self {
            id,
            label,
            blocks,
            cells,
            sides,
            outer,
        }
    }

    /// Sides chained into closed cycles (several for vertex-joined unions).
    pub fn cycles(&self, complex: &CellComplex) -> Vec<Vec<EdgeId>> {
        let mut inside = vec![false; complex.cells().len()];
        for &c in &self.cells {
            inside[c] = true;
        }
        let mut directed: Vec<(EdgeId, usize, usize)> = self
            .sides
            .iter()
            .map(|s| {
                let edge = &complex.edges()[s.edge];
                let &(c, k) = edge.cells.iter().find(|(c, _)| inside[*c]).expect("side of the union");
                let (from, to) = complex.cells()[c].oriented_side(k);
                (s.edge, from, to)
            })
            .collect();
        let mut cycles = Vec::new();
        while let Some((e, from, mut to)) = directed.first().copied() {
            directed.remove(0);
            let mut cyc = vec![e];
            while to != from {
                match directed.iter().position(|d| d.1 == to) {
                    Some(i) => {
                        let d = directed.remove(i);
                        cyc.push(d.0);
                        to = d.2;
                    }
                    None => break,
                }
            }
            cycles.push(cyc);
        }
        cycles
    }
}

pub(crate) fn polygon_sides(complex: &CellComplex, inside: &[bool]) -> Vec<PolygonSide> {
    let mut sides = Vec::new();
    for (e, edge) in complex.edges().iter().enumerate() {
        let n_in = edge.cells.iter().filter(|(c, _)| inside[*c]).count();
        if n_in == 1 {
            let role = match complex.boundary_kind(e) {
                Some(SideKind::A) => SideRole::A,
                Some(SideKind::B) => SideRole::B,
                None => SideRole::Interior,
            };
            sides.push(PolygonSide { edge: e, role });
        }
    }
    sides
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonMeasures {
    pub alpha: f64,
    pub beta: f64,
    pub length: f64,
    pub area: f64,
}

impl PolygonMeasures {
    /// `(l + 2H𝒜 - 2α, l - 2H𝒜 - 2β)`.
    pub fn slacks(&self, h: f64) -> (f64, f64) {
        (
            self.length + 2.0 * h * self.area - 2.0 * self.alpha,
            self.length - 2.0 * h * self.area - 2.0 * self.beta,
        )
    }

    /// `α - β - 2H𝒜`.
    pub fn balance(&self, h: f64) -> f64 {
        self.alpha - self.beta - 2.0 * h * self.area
    }
}

/// The horocycle of an ambient vertex pulled back to a cell's standard chart,
/// based exactly at the standard vertex.
pub(crate) fn pull_back(h: &Horocycle, chart_inv: &crate::hyp2::IsometryMap, std_base: crate::hyp2::BoundaryPoint) -> Result<Horocycle> {
    let p: HPoint = h.point_on().transformed(chart_inv);
    Horocycle::through(std_base, p)
}

/// Truncated length of an edge, measured in the standard chart of its
/// first incident cell.
pub fn edge_length(complex: &CellComplex, hs: &HorocycleSystem, e: EdgeId) -> Result<f64> {
    let edge = complex
        .edges()
        .get(e)
        .ok_or_else(|| Error::Complex(format!("edge {e} does not exist")))?;
    let (c, k) = edge.cells[0];
    let cell = &complex.cells()[c];
    let inv = cell.chart.inverse();
    let std_v = cell.params.vertices();
    let (s, t) = STD_SIDE_VERTICES[k];
    let hs_s = pull_back(hs.require(cell.vertices[s])?, &inv, std_v[s])?;
    let hs_t = pull_back(hs.require(cell.vertices[t])?, &inv, std_v[t])?;
    let arc = cell.params.sides()[k];
    truncated_length(&arc, &hs_s, &hs_t)
}

/// Lazily computed edge lengths for one complex and horocycle system.
pub struct Measurer<'a> {
    complex: &'a CellComplex,
    hs: &'a HorocycleSystem,
    lengths: Vec<OnceCell<std::result::Result<f64, Error>>>,
}

impl<'a> Measurer<'a> {
    pub fn new(complex: &'a CellComplex, hs: &'a HorocycleSystem) -> Result<Self> {
        hs.validate(complex)?;
        Ok(Self {
            complex,
            hs,
            lengths: (0..complex.edges().len()).map(|_| OnceCell::new()).collect(),
        })
    }

    pub fn complex(&self) -> &CellComplex {
        self.complex
    }

    pub fn edge_length(&self, e: EdgeId) -> Result<f64> {
        self.lengths[e]
            .get_or_init(|| edge_length(self.complex, self.hs, e))
            .clone()
    }

    pub fn measures_of_sides(&self, sides: &[PolygonSide], cells: &[CellId]) -> Result<PolygonMeasures> {
        let mut m = PolygonMeasures {
            alpha: 0.0,
            beta: 0.0,
            length: 0.0,
            area: 0.0,
        };
        for s in sides {
            let l = self.edge_length(s.edge)?;
            m.length += l;
            match s.role {
                SideRole::A => m.alpha += l,
                SideRole::B => m.beta += l,
                SideRole::Interior => {}
            }
        }
        m.area = crate::regions::union_area(self.complex, cells)?;
        Ok(m)
    }

    pub fn measures(&self, poly: &BoundaryPolygon) -> Result<PolygonMeasures> {
        self.measures_of_sides(&poly.sides, &poly.cells)
    }

    /// Measures of a single cell with its own sides typed as in the standard chart.
    pub fn cell_measures(&self, c: CellId) -> Result<PolygonMeasures> {
        let cell = &self.complex.cells()[c];
        let mut m = PolygonMeasures {
            alpha: 0.0,
            beta: 0.0,
            length: 0.0,
            area: cell.area,
        };
        for (k, &e) in cell.edges.iter().enumerate() {
            let l = self.edge_length(e)?;
            m.length += l;
            match SideKind::of_std_side(k) {
                SideKind::A => m.alpha += l,
                SideKind::B => m.beta += l,
            }
        }
        Ok(m)
    }
}

/// Measures of a boundary polygon.
pub fn measures(complex: &CellComplex, poly: &BoundaryPolygon, hs: &HorocycleSystem) -> Result<PolygonMeasures> {
    Measurer::new(complex, hs)?.measures(poly)
}

/// `(s_A, s_B)` of a boundary polygon.
pub fn polygon_slacks(complex: &CellComplex, poly: &BoundaryPolygon, hs: &HorocycleSystem) -> Result<(f64, f64)> {
    Ok(measures(complex, poly, hs)?.slacks(complex.h()))
}
