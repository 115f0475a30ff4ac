//! Python bindings. Results cross the boundary as plain dicts / lists built
//! from the serde representation of the core types.

use entanglion::inequalities::{attach_tails, random_suite as run_suite, scan_hybrid, SuiteConfig};
use entanglion::{
    catalog as catalog_entries, catalog_state, evaluate, haar_random_pure, measure as run_measure, measure_profile,
    Bipartition, MeasureKind, QuantumState, RoofConfig, SubsystemShape, TheoremId,
};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn roof_config(restarts: Option<usize>, seed: Option<u64>) -> RoofConfig {
    let mut cfg = RoofConfig::default();
    if let Some(r) = restarts {
        cfg.restarts = r;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg
}

fn parse_kind(name: &str) -> entanglion::Result<MeasureKind> {
    serde_json::from_value(Value::String(name.to_string()))
        .map_err(|_| entanglion::Error::InvalidConfig(format!("unknown measure `{name}`")))
}

pub fn measure_json(state: &QuantumState, kind: &str, a: Vec<usize>, b: Vec<usize>, cfg: &RoofConfig) -> entanglion::Result<Value> {
    let v = run_measure(parse_kind(kind)?, state, &Bipartition::new(a, b), cfg)?;
    Ok(serde_json::to_value(v).expect("serializable"))
}

pub fn profile_json(state: &QuantumState, focus: usize, kind: &str, cfg: &RoofConfig) -> entanglion::Result<Value> {
    let p = measure_profile(state, focus, parse_kind(kind)?, cfg)?;
    Ok(serde_json::to_value(p).expect("serializable"))
}

/// Reports for one theorem. Hybrid theorems without `t` are scanned over
/// every admissible split.
pub fn check_json(
    state: &QuantumState,
    theorem: &str,
    alpha: f64,
    focus: usize,
    t: Option<usize>,
    cfg: &RoofConfig,
) -> entanglion::Result<Value> {
    let id = TheoremId::parse(theorem)?;
    let mut profile = measure_profile(state, focus, id.measure(), cfg)?;
    let reports = match id {
        TheoremId::Thm3 | TheoremId::Thm7 => {
            attach_tails(&mut profile, state, cfg)?;
            match t {
                Some(_) => vec![evaluate(&profile, id, alpha, t)?],
                None => scan_hybrid(&profile, alpha)?,
            }
        }
        _ => vec![evaluate(&profile, id, alpha, t)?],
    };
    Ok(serde_json::to_value(reports).expect("serializable"))
}

#[pyclass(name = "State", module = "pyentanglion", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyState {
    inner: QuantumState,
}

#[pymethods]
impl PyState {
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        catalog_state(name).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        QuantumState::from_json(text).map(|inner| Self { inner }).map_err(err)
    }

    /// Pure state from amplitudes; normalized when `normalize` is set.
    #[staticmethod]
    #[pyo3(signature = (dims, amplitudes, normalize = false))]
    fn pure(dims: Vec<usize>, amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let shape = SubsystemShape::new(dims).map_err(err)?;
        let inner = if normalize {
            QuantumState::pure_normalized(amplitudes, shape)
        } else {
            QuantumState::pure(amplitudes, shape)
        };
        inner.map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn haar_random(dims: Vec<usize>, seed: u64) -> PyResult<Self> {
        let shape = SubsystemShape::new(dims).map_err(err)?;
        haar_random_pure(&shape, seed).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.shape().dims().to_vec()
    }

    #[getter]
    fn is_pure(&self) -> bool {
        self.inner.is_pure()
    }

    fn reduce(&self, keep: Vec<usize>) -> PyResult<Self> {
        self.inner.reduce(&keep).map(|inner| Self { inner }).map_err(err)
    }

    fn density_matrix(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.density_matrix();
        (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "State(dims={:?}, kind={})",
            self.inner.shape().dims(),
            if self.inner.is_pure() { "pure" } else { "mixed" }
        )
    }
}

#[pyfunction]
fn catalog(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &serde_json::to_value(catalog_entries()).expect("serializable"))
}

/// Returns `{name, value, method, error_bound}`.
#[pyfunction]
#[pyo3(signature = (state, kind, a, b, restarts = None, seed = None))]
fn measure<'py>(
    py: Python<'py>,
    state: &PyState,
    kind: &str,
    a: Vec<usize>,
    b: Vec<usize>,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = roof_config(restarts, seed);
    let v = py.detach(|| measure_json(&state.inner, kind, a, b, &cfg)).map_err(err)?;
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (state, focus = 0, kind = "lcren", restarts = None, seed = None))]
fn profile<'py>(
    py: Python<'py>,
    state: &PyState,
    focus: usize,
    kind: &str,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = roof_config(restarts, seed);
    let v = py.detach(|| profile_json(&state.inner, focus, kind, &cfg)).map_err(err)?;
    to_py(py, &v)
}

/// Returns a list of inequality reports for `theorem` at `alpha`.
#[pyfunction]
#[pyo3(signature = (state, theorem, alpha, focus = 0, t = None, restarts = None, seed = None))]
#[allow(clippy::too_many_arguments)]
fn check<'py>(
    py: Python<'py>,
    state: &PyState,
    theorem: &str,
    alpha: f64,
    focus: usize,
    t: Option<usize>,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = roof_config(restarts, seed);
    let v = py
        .detach(|| check_json(&state.inner, theorem, alpha, focus, t, &cfg))
        .map_err(err)?;
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (qubits = 3, count = 100, seed = 0, hybrid = false))]
fn random_suite(py: Python<'_>, qubits: usize, count: usize, seed: u64, hybrid: bool) -> PyResult<Bound<'_, PyAny>> {
    let cfg = SuiteConfig {
        qubits,
        count,
        seed,
        hybrid,
        ..SuiteConfig::default()
    };
    let summary = py.detach(|| run_suite(&cfg)).map_err(err)?;
    to_py(py, &serde_json::to_value(summary).expect("serializable"))
}

#[pymodule]
fn pyentanglion(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(random_suite, m)?)?;
    Ok(())
}
