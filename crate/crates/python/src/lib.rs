//! Python bindings: the `scherk` extension module.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use scherk_core::compare::compare_paper as core_compare_paper;
use scherk_core::domain::{
    self, check_admissibility, default_std_sizes, standard_horocycle_system, standard_quadrilateral, D3Mode,
    HorocycleSystem, IdealDomain, SideKind, Tolerances,
};
use scherk_core::exhaust::{default_base, run_exhaustion, ExhaustionSchedule};
use scherk_core::extend::{try_extend, ExtensionPolicy};
use scherk_core::hyp2::{self, HPoint};
use scherk_core::numerics::Quadrature;
use scherk_core::regions::{self, QuadParams};
use scherk_core::render::{render_svg, Chart, SceneSpec};
use scherk_core::report::{from_json, to_json, DomainSnapshot};
use scherk_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::CurvatureOutOfRange(_) | Error::InvalidParams(_) | Error::Input(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn point(x: f64, y: f64) -> PyResult<HPoint> {
    HPoint::new(x, y).map_err(py_err)
}

/// Hyperbolic distance between `(x1, y1)` and `(x2, y2)` in the upper half-plane.
#[pyfunction]
fn dist(x1: f64, y1: f64, x2: f64, y2: f64) -> PyResult<f64> {
    hyp2::dist_xy(x1, y1, x2, y2).map_err(py_err)
}

#[pyfunction]
fn xi(h: f64) -> PyResult<f64> {
    domain::xi(h).map_err(py_err)
}

#[pyfunction]
fn connectivity_bound(mu: f64, h: f64) -> PyResult<f64> {
    domain::connectivity_bound(mu, h).map_err(py_err)
}

/// The closed-form `d3` printed for the balanced quadrilateral.
#[pyfunction]
fn paper_d3(mu: f64, h: f64) -> PyResult<f64> {
    domain::paper_d3(mu, h).map_err(py_err)
}

/// Root of the balance function of the standard quadrilateral.
#[pyfunction]
fn solve_d3_star(mu: f64, h: f64) -> PyResult<f64> {
    domain::solve_d3_star(mu, h, &Quadrature::default()).map_err(py_err)
}

#[pyfunction]
fn quad_area(mu: f64, d3: f64, h: f64) -> PyResult<f64> {
    let p = QuadParams::new(mu, d3, h).map_err(py_err)?;
    regions::quad_area(&p, &Quadrature::default()).map_err(py_err)
}

/// Printed formulas against computed values, as a JSON document.
#[pyfunction]
#[pyo3(signature = (mu=1.0, h=0.25, r=0.05))]
fn compare_paper(mu: f64, h: f64, r: f64) -> PyResult<String> {
    let c = core_compare_paper(mu, h, r, &Quadrature::default()).map_err(py_err)?;
    to_json(&c).map_err(py_err)
}

/// Isometry `z -> M(z)` or `z -> M(-conj z)` with `M` a real Möbius map.
#[pyclass(module = "scherk", frozen, skip_from_py_object)]
#[derive(Clone)]
struct IsometryMap {
    inner: hyp2::IsometryMap,
}

#[pymethods]
impl IsometryMap {
    #[new]
    #[pyo3(signature = (a, b, c, d, reflect=false))]
    fn new(a: f64, b: f64, c: f64, d: f64, reflect: bool) -> PyResult<Self> {
        Ok(Self {
            inner: hyp2::IsometryMap::new(a, b, c, d, reflect).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn translation(t: f64) -> Self {
        Self {
            inner: hyp2::IsometryMap::translation(t),
        }
    }

    #[staticmethod]
    fn dilation(k: f64) -> PyResult<Self> {
        Ok(Self {
            inner: hyp2::IsometryMap::dilation(k).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn reflection() -> Self {
        Self {
            inner: hyp2::IsometryMap::reflection(),
        }
    }

    #[getter]
    fn matrix(&self) -> [f64; 4] {
        self.inner.matrix()
    }

    #[getter]
    fn reflects(&self) -> bool {
        self.inner.reflects()
    }

    fn apply(&self, x: f64, y: f64) -> PyResult<(f64, f64)> {
        let p = self.inner.apply_point(point(x, y)?);
        Ok((p.x, p.y))
    }

    fn compose(&self, other: &IsometryMap) -> Self {
        Self {
            inner: self.inner.compose(&other.inner),
        }
    }

    fn inverse(&self) -> Self {
        Self {
            inner: self.inner.inverse(),
        }
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d] = self.inner.matrix();
        format!("IsometryMap({a}, {b}, {c}, {d}, reflect={})", self.inner.reflects())
    }
}

fn chart(name: &str) -> PyResult<Chart> {
    match name {
        "halfplane" => Ok(Chart::Halfplane),
        "disk" => Ok(Chart::Disk),
        _ => Err(PyValueError::new_err(format!("unknown chart {name:?}; use 'halfplane' or 'disk'"))),
    }
}

/// An ideal domain together with its horocycle system.
#[pyclass(module = "scherk", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Domain {
    dom: IdealDomain,
    hs: HorocycleSystem,
}

#[pymethods]
impl Domain {
    /// The balanced standard quadrilateral with its default horocycles.
    #[staticmethod]
    #[pyo3(signature = (mu=1.0, h=0.25))]
    fn standard(mu: f64, h: f64) -> PyResult<Self> {
        let dom = standard_quadrilateral(mu, h, D3Mode::ComputedRoot, &Quadrature::default()).map_err(py_err)?;
        let p = dom.complex.cells()[0].params;
        let (r, m) = default_std_sizes(&p);
        let hs = standard_horocycle_system(&p, r, m).map_err(py_err)?;
        Ok(Self { dom, hs })
    }

    /// Reads a snapshot written by `to_json` or `scherk ... --snapshot`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (dom, hs) = from_json::<DomainSnapshot>(text)
            .and_then(DomainSnapshot::into_domain)
            .map_err(py_err)?;
        Ok(Self { dom, hs })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&DomainSnapshot::new(&self.dom, &self.hs)).map_err(py_err)
    }

    #[getter]
    fn h(&self) -> f64 {
        self.dom.h()
    }

    #[getter]
    fn cell_count(&self) -> usize {
        self.dom.complex.cells().len()
    }

    #[getter]
    fn side_count(&self) -> usize {
        self.dom.side_count()
    }

    /// Ideal vertices as x coordinates, `None` for the point at infinity.
    #[getter]
    fn vertices(&self) -> Vec<Option<f64>> {
        self.dom.complex.vertices().iter().map(|v| v.x()).collect()
    }

    /// Boundary cycle as `(from vertex, to vertex, "A" | "B")`.
    #[getter]
    fn boundary(&self) -> Vec<(usize, usize, &'static str)> {
        self.dom
            .cycle
            .iter()
            .map(|s| (s.from, s.to, if s.kind == SideKind::A { "A" } else { "B" }))
            .collect()
    }

    fn balance(&self) -> PyResult<f64> {
        domain::balance_residual(&self.dom, &self.hs).map_err(py_err)
    }

    /// Admissibility report over every connected union of cells, as JSON.
    fn check(&self) -> PyResult<String> {
        let atomic = self.dom.complex.clone().with_atomic_blocks();
        let report = check_admissibility(&atomic, &self.hs, &Tolerances::default()).map_err(py_err)?;
        to_json(&report).map_err(py_err)
    }

    /// One extension step; raises when a check fails.
    #[pyo3(signature = (phi_ratio=0.01))]
    fn extend(&self, phi_ratio: f64) -> PyResult<Self> {
        let policy = ExtensionPolicy {
            phi_ratio,
            ..ExtensionPolicy::default()
        };
        let out = try_extend(&self.dom, &self.hs, &policy, &Quadrature::default()).map_err(py_err)?;
        if !out.pass {
            return Err(PyRuntimeError::new_err(out.failures().join("; ")));
        }
        Ok(Self {
            dom: out.domain,
            hs: out.hs,
        })
    }

    /// Runs `n` extension steps and returns the trace as JSON.
    #[pyo3(signature = (n, phi_ratio=0.01, shrink=0.5))]
    fn exhaust(&self, n: usize, phi_ratio: f64, shrink: f64) -> PyResult<String> {
        let mut schedule = ExhaustionSchedule::new(n, default_base(&self.dom));
        schedule.phi_ratio = vec![phi_ratio];
        schedule.shrink = shrink;
        schedule.validate().map_err(py_err)?;
        let run = run_exhaustion(&self.dom, &self.hs, &schedule, &Quadrature::default()).map_err(py_err)?;
        to_json(&run.trace).map_err(py_err)
    }

    /// The image of the domain and its horocycles under `g`.
    fn transformed(&self, g: &IsometryMap) -> Self {
        Self {
            dom: self.dom.transformed(&g.inner),
            hs: self.hs.transformed(&g.inner),
        }
    }

    #[pyo3(signature = (chart="halfplane"))]
    fn svg(&self, chart: &str) -> PyResult<String> {
        let scene = SceneSpec::new(self::chart(chart)?);
        let input = self.to_json()?;
        Ok(render_svg(&self.dom, Some(&self.hs), &scene, &input))
    }

    fn __repr__(&self) -> String {
        format!(
            "Domain(h={}, cells={}, sides={})",
            self.dom.h(),
            self.dom.complex.cells().len(),
            self.dom.side_count()
        )
    }
}

#[pymodule]
fn scherk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dist, m)?)?;
    m.add_function(wrap_pyfunction!(xi, m)?)?;
    m.add_function(wrap_pyfunction!(connectivity_bound, m)?)?;
    m.add_function(wrap_pyfunction!(paper_d3, m)?)?;
    m.add_function(wrap_pyfunction!(solve_d3_star, m)?)?;
    m.add_function(wrap_pyfunction!(quad_area, m)?)?;
    m.add_function(wrap_pyfunction!(compare_paper, m)?)?;
    m.add_class::<IsometryMap>()?;
    m.add_class::<Domain>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
