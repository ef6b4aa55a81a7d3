//! Python bindings: scenarios, runs, traces, verification and the geometric
//! primitives underneath.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mutvis::algorithm::{plan, AlgorithmParams};
use mutvis::engine::{check_final, run_with, Colliding, Standard, Trace};
use mutvis::geometry::{self, Point};
use mutvis::model::Observed;
use mutvis::render::render_trace;
use mutvis::scenario::{default_spread, generate, Scenario};
use mutvis::trace::TraceFile;
use mutvis::visibility::{self, DiskSet, DEFAULT_SAMPLES, ORACLE_SAMPLES};
use mutvis::{FramePolicy, Light, Snapshot};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pt((x, y): (f64, f64)) -> Point {
    Point::new(x, y)
}

fn tup(p: Point) -> (f64, f64) {
    (p.x, p.y)
}

fn parse_light(s: &str) -> PyResult<Light> {
    s.parse().map_err(value_error)
}

#[pyclass(name = "Scenario", frozen)]
struct PyScenario {
    inner: Scenario,
}

#[pymethods]
impl PyScenario {
    #[new]
    #[pyo3(signature = (positions, seed=0, frames="rotated", predict=true, k=DEFAULT_SAMPLES, max_rounds=None))]
    fn new(
        positions: Vec<(f64, f64)>,
        seed: u64,
        frames: &str,
        predict: bool,
        k: usize,
        max_rounds: Option<u64>,
    ) -> PyResult<Self> {
        let mut inner = Scenario::new(positions.into_iter().map(pt).collect(), seed);
        inner.frames = frames.parse::<FramePolicy>().map_err(value_error)?;
        inner.predict = predict;
        inner.samples = k;
        if let Some(m) = max_rounds {
            inner.max_rounds = m;
        }
        inner.validate().map_err(value_error)?;
        Ok(PyScenario { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed=0, spread=None, collinear=false))]
    fn generate(n: usize, seed: u64, spread: Option<f64>, collinear: bool) -> PyResult<Self> {
        let inner = generate(n, seed, spread.unwrap_or_else(|| default_spread(n)), collinear).map_err(value_error)?;
        Ok(PyScenario { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyScenario {
            inner: Scenario::parse(text).map_err(value_error)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn frames(&self) -> &'static str {
        self.inner.frames.as_str()
    }

    #[getter]
    fn predict(&self) -> bool {
        self.inner.predict
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.samples
    }

    #[getter]
    fn max_rounds(&self) -> u64 {
        self.inner.max_rounds
    }

    #[getter]
    fn positions(&self) -> Vec<(f64, f64)> {
        self.inner.positions.iter().copied().map(tup).collect()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Run the algorithm; `broken=True` swaps in a colliding controller.
    #[pyo3(signature = (broken=false))]
    fn run(&self, py: Python<'_>, broken: bool) -> PyTrace {
        let scenario = &self.inner;
        let trace = py.detach(|| {
            if broken {
                run_with(scenario, &Colliding)
            } else {
                run_with(scenario, &Standard)
            }
        });
        PyTrace::from_trace(trace)
    }

    fn __repr__(&self) -> String {
        format!("Scenario(n={}, seed={}, frames={})", self.inner.len(), self.inner.seed, self.inner.frames)
    }
}

#[pyclass(name = "Trace", frozen)]
struct PyTrace {
    file: TraceFile,
    trace: Option<Trace>,
}

impl PyTrace {
    fn from_trace(trace: Trace) -> Self {
        PyTrace {
            file: TraceFile::from(&trace),
            trace: Some(trace),
        }
    }
}

#[pymethods]
impl PyTrace {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyTrace {
            file: TraceFile::parse(text).map_err(value_error)?,
            trace: None,
        })
    }

    #[getter]
    fn outcome(&self) -> &str {
        &self.file.outcome
    }

    #[getter]
    fn rounds(&self) -> u64 {
        self.file.rounds_used
    }

    #[getter]
    fn solved(&self) -> bool {
        self.file.outcome == "solved"
    }

    fn final_positions(&self) -> Vec<(f64, f64)> {
        self.file.final_robots.iter().map(|r| tup(r.position)).collect()
    }

    fn final_lights(&self) -> Vec<String> {
        self.file.final_robots.iter().map(|r| r.light.clone()).collect()
    }

    /// Roles per round, `"-"` for robots that had terminated.
    fn roles(&self) -> Vec<Vec<String>> {
        self.file
            .rounds
            .iter()
            .map(|r| r.robots.iter().map(|x| x.role.clone()).collect())
            .collect()
    }

    fn to_text(&self) -> String {
        self.file.to_text()
    }

    /// `(name, passed, detail)` per check.
    fn verify(&self, py: Python<'_>) -> Vec<(String, bool, String)> {
        let file = &self.file;
        let report = py.detach(|| mutvis::verify(file));
        report
            .checks
            .into_iter()
            .map(|c| (c.name.to_string(), c.passed, c.detail))
            .collect()
    }

    /// Final-state report; only available for traces produced by `run`.
    fn check_final<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let trace = self
            .trace
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("check_final needs a trace produced by Scenario.run"))?;
        let rep = py.detach(|| check_final(&trace.final_config));
        let d = PyDict::new(py);
        d.set_item("mutually_visible", rep.mutually_visible)?;
        d.set_item("all_red", rep.all_red)?;
        d.set_item("strictly_convex", rep.strictly_convex)?;
        d.set_item("spacing", rep.spacing)?;
        d.set_item("passed", rep.passed())?;
        Ok(d)
    }

    fn render(&self, dir: PathBuf) -> PyResult<Vec<PathBuf>> {
        render_trace(&self.file, &dir).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Trace(n={}, outcome={}, rounds={})", self.file.header.n, self.file.outcome, self.file.rounds_used)
    }
}

#[pyfunction]
#[pyo3(signature = (centers, i, j, k=DEFAULT_SAMPLES))]
fn visible(centers: Vec<(f64, f64)>, i: usize, j: usize, k: usize) -> PyResult<bool> {
    if i >= centers.len() || j >= centers.len() {
        return Err(PyValueError::new_err("index out of range"));
    }
    Ok(visibility::visible(i, j, &DiskSet::new(centers.into_iter().map(pt).collect()), k))
}

#[pyfunction]
#[pyo3(signature = (centers, i, j, k=ORACLE_SAMPLES))]
fn visibility_oracle(centers: Vec<(f64, f64)>, i: usize, j: usize, k: usize) -> PyResult<bool> {
    if i >= centers.len() || j >= centers.len() {
        return Err(PyValueError::new_err("index out of range"));
    }
    Ok(visibility::visibility_oracle(i, j, &DiskSet::new(centers.into_iter().map(pt).collect()), k))
}

/// `{"vertices": [...], "on_edge": [...], "interior": [...]}` with vertices
/// counterclockwise.
#[pyfunction]
fn convex_hull<'py>(py: Python<'py>, points: Vec<(f64, f64)>) -> PyResult<Bound<'py, PyDict>> {
    let pts: Vec<Point> = points.into_iter().map(pt).collect();
    let h = geometry::convex_hull(&pts).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("vertices", h.vertices)?;
    d.set_item("on_edge", h.on_edge)?;
    d.set_item("interior", h.interior)?;
    d.set_item("degenerate_line", h.degenerate_line.is_some())?;
    Ok(d)
}

#[pyfunction]
fn min_dist_moving(p0: (f64, f64), p1: (f64, f64), q0: (f64, f64), q1: (f64, f64)) -> f64 {
    geometry::min_dist_moving(pt(p0), pt(p1), pt(q0), pt(q1))
}

#[pyfunction]
fn exterior_bisector(prev: (f64, f64), v: (f64, f64), next: (f64, f64)) -> PyResult<(f64, f64)> {
    geometry::exterior_bisector(pt(prev), pt(v), pt(next))
        .map(tup)
        .map_err(value_error)
}

/// One Compute call on a local snapshot. `others` holds `((x, y), light)`
/// relative to the observer.
#[pyfunction]
#[pyo3(signature = (own_light, others, predict=true))]
fn compute<'py>(
    py: Python<'py>,
    own_light: &str,
    others: Vec<((f64, f64), String)>,
    predict: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let observed = others
        .into_iter()
        .map(|(p, l)| {
            Ok(Observed {
                position: pt(p),
                light: parse_light(&l)?,
            })
        })
        .collect::<PyResult<Vec<_>>>()?;
    let s = Snapshot::new(parse_light(own_light)?, observed);
    let pl = plan(&s, &AlgorithmParams { predict });
    let d = PyDict::new(py);
    d.set_item("role", pl.role.as_str())?;
    d.set_item("destination", pl.decision.destination.map(tup))?;
    d.set_item("light", pl.decision.new_light.as_str())?;
    d.set_item("terminate", pl.decision.terminate)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "mutvis")]
fn mutvis_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyTrace>()?;
    m.add_function(wrap_pyfunction!(visible, m)?)?;
    m.add_function(wrap_pyfunction!(visibility_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(convex_hull, m)?)?;
    m.add_function(wrap_pyfunction!(min_dist_moving, m)?)?;
    m.add_function(wrap_pyfunction!(exterior_bisector, m)?)?;
    m.add_function(wrap_pyfunction!(compute, m)?)?;
    Ok(())
}
