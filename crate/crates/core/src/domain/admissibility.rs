//! Polygon enumeration and the admissibility conditions.

use serde::{Deserialize, Serialize};

use super::complex::{CellComplex, IdealDomain};
use super::horocycles::HorocycleSystem;
use super::measures::{BoundaryPolygon, Measurer};
use crate::arcs::Horocycle;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance on the balance residual of the outer boundary.
    pub balance: f64,
    /// Slacks of proper polygons must exceed this value.
    pub slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            balance: 1e-7,
            slack: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    pub max_blocks: usize,
    pub max_polygons: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_blocks: 64,
            max_polygons: 1 << 21,
        }
    }
}

/// Connected, proper, nonempty subsets of a graph on at most 64 nodes, as
/// bitmasks, each listed once (Wernicke's ESU scheme).
pub fn connected_subsets(adj: &[Vec<usize>], limits: &EnumerationLimits) -> Result<Vec<u64>> {
    let n = adj.len();
    if n > limits.max_blocks.min(64) {
        return Err(Error::EnumerationLimit(format!(
            "{n} blocks exceed the cap of {}",
            limits.max_blocks.min(64)
        )));
    }
    let nbr: Vec<u64> = adj
        .iter()
        .map(|l| l.iter().fold(0u64, |m, &j| m | (1u64 << j)))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();

    fn grow(sub: u64, sub_nbr: u64, ext: u64, v: usize, nbr: &[u64], out: &mut Vec<u64>, cap: usize) -> Result<()> {
        if out.len() >= cap {
            return Err(Error::EnumerationLimit(format!("more than {cap} polygons")));
        }
        out.push(sub);
        let mut ext = ext;
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let above = if v == 63 { 0 } else { !((1u64 << (v + 1)) - 1) };
            let fresh = nbr[w] & !sub & !sub_nbr & above;
            grow(sub | (1 << w), sub_nbr | nbr[w], ext | fresh, v, nbr, out, cap)?;
        }
        Ok(())
    }

    for v in 0..n {
        let above = if v == 63 { 0 } else { !((1u64 << (v + 1)) - 1) };
        grow(1 << v, nbr[v], nbr[v] & above, v, &nbr, &mut out, limits.max_polygons)?;
    }
    out.retain(|&m| m != full);
    out.sort_by_key(|&m| (m.count_ones(), m.reverse_bits()));
    Ok(out)
}

fn label_of(complex: &CellComplex, blocks: &[usize]) -> String {
    let names: Vec<&str> = blocks.iter().map(|&b| complex.blocks()[b].name.as_str()).collect();
    names.join("∪")
}

fn polygon_for(complex: &CellComplex, mask: u64) -> BoundaryPolygon {
    let blocks: Vec<usize> = (0..complex.blocks().len()).filter(|b| mask >> b & 1 == 1).collect();
    let cells: Vec<usize> = blocks
        .iter()
        .flat_map(|&b| complex.blocks()[b].cells.iter().copied())
        .collect();
    let label = format!("∂({})", label_of(complex, &blocks));
    let id = blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",");
    BoundaryPolygon::from_cells(complex, &cells, id, label, blocks)
}

/// Boundaries of all connected proper unions of blocks (side- or
/// vertex-joined), followed by the outer boundary.
pub fn enumerate_boundary_polygons(complex: &CellComplex) -> Result<Vec<BoundaryPolygon>> {
    enumerate_boundary_polygons_with(complex, &EnumerationLimits::default())
}

pub fn enumerate_boundary_polygons_with(complex: &CellComplex, limits: &EnumerationLimits) -> Result<Vec<BoundaryPolygon>> {
    let masks = connected_subsets(&complex.block_adjacency(), limits)?;
    let mut polys: Vec<BoundaryPolygon> = masks.iter().map(|&m| polygon_for(complex, m)).collect();
    let n = complex.blocks().len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut outer = polygon_for(complex, full);
    outer.id = "outer".into();
    polys.push(outer);
    Ok(polys)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonSlack {
    pub id: String,
    pub label: String,
    pub cells: Vec<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub length: f64,
    pub area: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub outer: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorocycleEntry {
    pub vertex: usize,
    pub horocycle: Horocycle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub h: f64,
    pub balance: f64,
    pub tolerances: Tolerances,
    pub guarantee: String,
    pub polygon_count: usize,
    pub min_slack: Option<f64>,
    pub min_slack_polygon: Option<String>,
    pub polygons: Vec<PolygonSlack>,
    pub horocycles: Vec<HorocycleEntry>,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl AdmissibilityReport {
    pub fn polygon(&self, label: &str) -> Option<&PolygonSlack> {
        self.polygons.iter().find(|p| p.label == label)
    }

    /// The report without its per-polygon list and horocycles.
    pub fn summary(&self) -> AdmissibilityReport {
        AdmissibilityReport {
            polygons: Vec::new(),
            horocycles: Vec::new(),
            ..self.clone()
        }
    }
}

pub const GUARANTEE_CELL_UNIONS: &str =
    "balance of the outer boundary; strict inequalities over all connected unions of blocks (cell-union boundary polygons only)";

/// Balance of the outer boundary and slacks of every enumerated polygon.
pub fn check_admissibility(complex: &CellComplex, hs: &HorocycleSystem, tol: &Tolerances) -> Result<AdmissibilityReport> {
    check_admissibility_with(complex, hs, tol, &EnumerationLimits::default())
}

pub fn check_admissibility_with(
    complex: &CellComplex,
    hs: &HorocycleSystem,
    tol: &Tolerances,
    limits: &EnumerationLimits,
) -> Result<AdmissibilityReport> {
    let measurer = Measurer::new(complex, hs)?;
    let polys = enumerate_boundary_polygons_with(complex, limits)?;
    let h = complex.h();
    let mut balance = f64::NAN;
    let mut polygons = Vec::with_capacity(polys.len());
    let mut failures = Vec::new();
    let mut min_slack: Option<f64> = None;
    let mut min_slack_polygon = None;
    for p in &polys {
        let m = measurer.measures(p)?;
        let (s_a, s_b) = m.slacks(h);
        let pass = if p.outer {
            balance = m.balance(h);
            let ok = balance.abs() <= tol.balance;
            if !ok {
                failures.push(format!("outer boundary balance {balance:e} exceeds {:e}", tol.balance));
            }
            ok
        } else {
            let ok = s_a > tol.slack && s_b > tol.slack;
            if !ok {
                failures.push(format!("{}: s_A = {s_a:e}, s_B = {s_b:e}", p.label));
            }
            if min_slack.is_none_or(|m| s_a.min(s_b) < m) {
                min_slack = Some(s_a.min(s_b));
                min_slack_polygon = Some(p.label.clone());
            }
            ok
        };
        polygons.push(PolygonSlack {
            id: p.id.clone(),
            label: p.label.clone(),
            cells: p.cells.clone(),
            alpha: m.alpha,
            beta: m.beta,
            length: m.length,
            area: m.area,
            s_a,
            s_b,
            outer: p.outer,
            pass,
        });
    }
    let horocycles = hs
        .entries()
        .iter()
        .enumerate()
        .filter_map(|(v, h)| h.map(|horocycle| HorocycleEntry { vertex: v, horocycle }))
        .collect();
    Ok(AdmissibilityReport {
        h,
        balance,
        tolerances: *tol,
        guarantee: GUARANTEE_CELL_UNIONS.into(),
        polygon_count: polygons.len(),
        min_slack,
        min_slack_polygon,
        polygons,
        horocycles,
        pass: failures.is_empty(),
        failures,
    })
}

/// `α - β - 2H𝒜` of the outer boundary of a domain.
pub fn balance_residual(dom: &IdealDomain, hs: &HorocycleSystem) -> Result<f64> {
    let complex = &dom.complex;
    let measurer = Measurer::new(complex, hs)?;
    let all: Vec<usize> = (0..complex.cells().len()).collect();
    let outer = BoundaryPolygon::from_cells(complex, &all, "outer".into(), "outer".into(), Vec::new());
    Ok(measurer.measures(&outer)?.balance(complex.h()))
}
