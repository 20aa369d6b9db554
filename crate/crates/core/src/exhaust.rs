//! Iterated extension with shrinking horocycles.

use serde::{Deserialize, Serialize};

use crate::arcs::{EuclidShape, HArc};
use crate::domain::{check_admissibility, HorocycleSystem, IdealDomain};
use crate::error::{Error, Result};
use crate::extend::{try_extend, ExtensionPolicy, ExtensionRecord};
use crate::hyp2::{dist, HPoint};
use crate::numerics::{minimize_sampled, Quadrature};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionSchedule {
    pub iterations: usize,
    /// φ ratio for each step; the last entry repeats when shorter than `iterations`.
    pub phi_ratio: Vec<f64>,
    /// Factor applied to existing horocycles before each step.
    pub shrink: f64,
    pub base: HPoint,
    pub max_cells: usize,
    pub policy: ExtensionPolicy,
}

impl ExhaustionSchedule {
    pub fn new(iterations: usize, base: HPoint) -> Self {
        Self {
            iterations,
            phi_ratio: vec![0.01],
            shrink: 0.5,
            base,
            max_cells: 4096,
            policy: ExtensionPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParams("at least one iteration is required".into()));
        }
        if self.phi_ratio.is_empty() || self.phi_ratio.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(Error::InvalidParams("phi ratios must lie in (0, 1)".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidParams("shrink factor must lie in (0, 1)".into()));
        }
        Ok(())
    }

    fn ratio(&self, step: usize) -> f64 {
        self.phi_ratio[(step - 1).min(self.phi_ratio.len() - 1)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionStep {
    pub step: usize,
    pub cells: usize,
    pub sides: usize,
    pub balance: f64,
    pub min_slack: Option<f64>,
    pub boundary_distance: f64,
    pub distance_increase: Option<f64>,
    pub min_horocycle_gap: f64,
    pub phi_ratio: Option<f64>,
    pub phi_min: Option<f64>,
    pub phi_max: Option<f64>,
    pub guarantee: String,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionTrace {
    pub base: HPoint,
    pub steps: Vec<ExhaustionStep>,
    pub min_distance_increase: Option<f64>,
    pub monotone: bool,
    pub pass: bool,
}

/// Result of a run: the trace plus the domains and horocycle systems.
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustionRun {
    pub trace: ExhaustionTrace,
    pub domains: Vec<IdealDomain>,
    pub horocycles: Vec<HorocycleSystem>,
    pub records: Vec<Vec<ExtensionRecord>>,
}

/// Hyperbolic distance from `p` to an arc, by dense sampling and Brent refinement.
pub fn distance_to_arc(p: HPoint, arc: &HArc) -> f64 {
    match arc.euclid {
        EuclidShape::Circle { .. } => {
            let (ta, tb) = arc.param_range();
            let (lo, hi) = if ta < tb { (ta, tb) } else { (tb, ta) };
            let eps = 1e-12 * (hi - lo);
            minimize_sampled(|t| dist(p, arc.point_at(t)), lo + eps, hi - eps, 512).1
        }
        EuclidShape::Line { .. } => {
            let c = p.y.ln();
            minimize_sampled(|u| dist(p, arc.point_at(u.exp())), c - 40.0, c + 40.0, 1024).1
        }
    }
}

/// Minimum distance from an interior base point to the boundary sides.
pub fn boundary_distance(dom: &IdealDomain, base: HPoint) -> Result<f64> {
    let inside = dom
        .complex
        .cells()
        .iter()
        .any(|c| c.params.contains(c.chart.inverse().apply_point(base)));
    if !inside {
        return Err(Error::InvalidParams(format!("base point {base} is not inside the domain")));
    }
    Ok(dom
        .cycle
        .iter()
        .map(|s| distance_to_arc(base, &dom.complex.edge_arc(s.edge)))
        .fold(f64::INFINITY, f64::min))
}

/// Default base point inside a seed quadrilateral's standard chart.
pub fn default_base(dom: &IdealDomain) -> HPoint {
    let c = &dom.complex.cells()[0];
    c.chart.apply_point(c.params.interior_point())
}

pub fn run_exhaustion(seed: &IdealDomain, hs: &HorocycleSystem, schedule: &ExhaustionSchedule, quad: &Quadrature) -> Result<ExhaustionRun> {
    schedule.validate()?;
    let tol = schedule.policy.tol;
    let seed_report = check_admissibility(&seed.complex.clone().with_atomic_blocks(), hs, &tol)?;
    let d0 = boundary_distance(seed, schedule.base)?;
    let mut steps = vec![ExhaustionStep {
        step: 0,
        cells: seed.complex.cells().len(),
        sides: seed.side_count(),
        balance: seed_report.balance,
        min_slack: seed_report.min_slack,
        boundary_distance: d0,
        distance_increase: None,
        min_horocycle_gap: hs.min_separation(),
        phi_ratio: None,
        phi_min: None,
        phi_max: None,
        guarantee: seed_report.guarantee.clone(),
        pass: seed_report.pass,
        failures: seed_report.failures.clone(),
    }];
    let mut domains = vec![seed.clone()];
    let mut systems = vec![hs.clone()];
    let mut all_records = Vec::new();
    let mut monotone = true;
    let mut pass = seed_report.pass;
    for step in 1..=schedule.iterations {
        let prev = domains.last().expect("seed");
        let projected = prev.complex.cells().len() + 2 * prev.side_count();
        if projected > schedule.max_cells {
            return Err(Error::EnumerationLimit(format!(
                "step {step} would reach {projected} cells, above the cap of {}",
                schedule.max_cells
            )));
        }
        let shrunk = systems.last().expect("seed").shrunk(schedule.shrink);
        let policy = ExtensionPolicy {
            phi_ratio: schedule.ratio(step),
            ..schedule.policy
        };
        let out = try_extend(prev, &shrunk, &policy, quad)?;
        let balance = crate::domain::balance_residual(&out.domain, &out.hs)?;
        let d = boundary_distance(&out.domain, schedule.base)?;
        let prev_d = steps.last().expect("seed").boundary_distance;
        if !(d > prev_d) {
            monotone = false;
        }
        let min_slack = out
            .records
            .iter()
            .map(|r| r.min_slack())
            .chain(out.full_check.iter().filter_map(|f| f.min_slack))
            .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))));
        let phis = out.records.iter().flat_map(|r| [r.phi_e, r.phi_eprime]);
        let phi_min = phis.clone().fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))));
        let phi_max = phis.fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.max(s))));
        let mut failures = out.failures();
        if balance.abs() > tol.balance {
            failures.push(format!("balance {balance:e} of the new boundary exceeds {:e}", tol.balance));
        }
        let step_pass = failures.is_empty();
        pass &= step_pass;
        steps.push(ExhaustionStep {
            step,
            cells: out.domain.complex.cells().len(),
            sides: out.domain.side_count(),
            balance,
            min_slack,
            boundary_distance: d,
            distance_increase: Some(d - prev_d),
            min_horocycle_gap: out.hs.min_separation(),
            phi_ratio: Some(policy.phi_ratio),
            phi_min,
            phi_max,
            guarantee: out.guarantee.clone(),
            pass: step_pass,
            failures,
        });
        domains.push(out.domain);
        systems.push(out.hs);
        all_records.push(out.records);
        if !step_pass {
            break;
        }
    }
    let min_distance_increase = steps
        .iter()
        .filter_map(|s| s.distance_increase)
        .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))));
    Ok(ExhaustionRun {
        trace: ExhaustionTrace {
            base: schedule.base,
            steps,
            min_distance_increase,
            monotone,
            pass: pass && monotone,
        },
        domains,
        horocycles: systems,
        records: all_records,
    })
}
