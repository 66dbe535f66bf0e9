//! Python bindings for `nrep-core`.
//!
//! Reports come back as plain dicts and lists; states are wrapped in
//! [`PyFermionState`]. Library errors raise `ValueError` (`OSError` for I/O).

// pyo3 0.22 wrappers trip this lint on `PyResult` returns
#![allow(clippy::useless_conversion)]

use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use nrep_core::explorer::{self, CampaignConfig, CampaignKind};
use nrep_core::fermion::{one_rdm, rotate, slater_of, FermionState, Spectrum};
use nrep_core::io::{parse_state, state_to_json};
use nrep_core::numerics::{CMatrix, Tolerances};
use nrep_core::representability as rep;
use nrep_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait IntoPyResult<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPyResult<T> for nrep_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn json_to_py(py: Python<'_>, v: &Value) -> PyObject {
    match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py(py)
            }
        }
        Value::String(s) => s.into_py(py),
        Value::Array(a) => PyList::new_bound(py, a.iter().map(|x| json_to_py(py, x))).into_py(py),
        Value::Object(m) => {
            let d = PyDict::new_bound(py);
            for (k, x) in m {
                d.set_item(k, json_to_py(py, x)).expect("string keys");
            }
            d.into_py(py)
        }
    }
}

fn to_py<T: Serialize>(py: Python<'_>, x: &T) -> PyResult<PyObject> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(json_to_py(py, &v))
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Antisymmetric N-fermion state over the sorted Slater-determinant basis.
#[pyclass(name = "FermionState", module = "nrep")]
#[derive(Clone)]
pub struct PyFermionState {
    inner: FermionState,
}

impl From<FermionState> for PyFermionState {
    fn from(inner: FermionState) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyFermionState {
    #[new]
    fn new(n: usize, r: usize, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(FermionState::new(n, r, amplitudes).py()?.into())
    }

    /// Build from `[(orbitals, amplitude), ...]` with 1-based, possibly unsorted orbitals.
    #[staticmethod]
    fn from_terms(n: usize, r: usize, terms: Vec<(Vec<usize>, Complex64)>) -> PyResult<Self> {
        Ok(FermionState::from_terms(n, r, &terms).py()?.into())
    }

    #[staticmethod]
    fn slater(orbitals: Vec<usize>, r: usize) -> PyResult<Self> {
        Ok(slater_of(&orbitals, orbitals.len(), r).py()?.into())
    }

    /// Normalized complex-Gaussian random state; same seed, same state.
    #[staticmethod]
    fn random(n: usize, r: usize, seed: u64) -> PyResult<Self> {
        Ok(explorer::random_state(n, r, seed).py()?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(parse_state(text).py()?.into())
    }

    fn to_json(&self) -> PyResult<String> {
        state_to_json(&self.inner).py()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    /// Basis determinants in storage order.
    fn basis(&self) -> Vec<Vec<usize>> {
        self.inner.basis().into_iter().map(Vec::from).collect()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn normalized(&self) -> PyResult<Self> {
        Ok(self.inner.normalized().py()?.into())
    }

    /// One-particle density matrix (trace N) as nested lists.
    fn one_rdm(&self) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_rows(one_rdm(&self.inner).py()?.matrix()))
    }

    /// Natural occupation numbers, non-increasing.
    fn spectrum(&self) -> PyResult<Vec<f64>> {
        Ok(one_rdm(&self.inner).py()?.spectrum().py()?.values().to_vec())
    }

    /// Apply a one-particle unitary given as nested lists.
    fn rotate(&self, u: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let m = CMatrix::from_rows(&u).py()?;
        Ok(rotate(&self.inner, &m).py()?.into())
    }

    fn __repr__(&self) -> String {
        format!(
            "FermionState(n={}, r={}, norm={:.6})",
            self.inner.n(),
            self.inner.r(),
            self.inner.norm()
        )
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }
}

fn spectrum(lambdas: Vec<f64>, n: usize) -> PyResult<Spectrum> {
    Spectrum::new(lambdas, n).py()
}

#[pyfunction]
#[pyo3(signature = (lambdas, n, tol = 1e-8))]
fn check_pauli(py: Python<'_>, lambdas: Vec<f64>, n: usize, tol: f64) -> PyResult<PyObject> {
    to_py(py, &rep::check_pauli(&spectrum(lambdas, n)?, tol).py()?)
}

#[pyfunction]
#[pyo3(signature = (lambdas, tol = 1e-8))]
fn check_bd(py: Python<'_>, lambdas: Vec<f64>, tol: f64) -> PyResult<PyObject> {
    to_py(py, &rep::check_bd(&spectrum(lambdas, 3)?, tol).py()?)
}

#[pyfunction]
#[pyo3(signature = (lambdas, tol = 1e-8))]
fn check_two_rep(py: Python<'_>, lambdas: Vec<f64>, tol: f64) -> PyResult<PyObject> {
    to_py(py, &rep::check_two_rep(&spectrum(lambdas, 2)?, tol).py()?)
}

#[pyfunction]
#[pyo3(signature = (lambdas, n, tol = 1e-8))]
fn check_rank_n_plus_2(py: Python<'_>, lambdas: Vec<f64>, n: usize, tol: f64) -> PyResult<PyObject> {
    to_py(py, &rep::check_rank_n_plus_2(&spectrum(lambdas, n)?, n, tol).py()?)
}

#[pyfunction]
#[pyo3(signature = (a, b, c, tol = 1e-8))]
fn check_weyl_2x2(py: Python<'_>, a: [f64; 2], b: [f64; 2], c: [f64; 2], tol: f64) -> PyResult<PyObject> {
    to_py(py, &rep::check_weyl_2x2(a, b, c, tol).py()?)
}

/// Returns `(coefficients, state)` for a sorted six-entry spectrum.
#[pyfunction]
#[pyo3(signature = (lambdas, tol = 1e-8))]
fn construct_bd_preimage(py: Python<'_>, lambdas: Vec<f64>, tol: f64) -> PyResult<(PyObject, PyFermionState)> {
    let (c, psi) = rep::construct_bd_preimage(&spectrum(lambdas, 3)?, tol).py()?;
    Ok((to_py(py, &c)?, psi.into()))
}

#[pyfunction]
#[pyo3(signature = (lambdas, phases, tol = 1e-8))]
fn construct_two_preimage(lambdas: Vec<f64>, phases: Vec<f64>, tol: f64) -> PyResult<PyFermionState> {
    Ok(rep::construct_two_preimage(&spectrum(lambdas, 2)?, &phases, tol)
        .py()?
        .into())
}

/// Eight natural-form coefficients (index `4a + 2b + c`), leakage and occupations.
#[pyfunction]
fn natural_form(py: Python<'_>, state: &PyFermionState) -> PyResult<PyObject> {
    let nf = rep::natural_form(&state.inner, &Tolerances::default()).py()?;
    let d = PyDict::new_bound(py);
    d.set_item("coefficients", nf.coefficients.to_vec())?;
    d.set_item("leakage", nf.leakage)?;
    d.set_item("lambdas", nf.spectrum.values().to_vec())?;
    d.set_item("orbitals", matrix_rows(&nf.orbitals))?;
    d.set_item("state", PyFermionState::from(nf.state).into_py(py))?;
    Ok(d.into_py(py))
}

#[pyfunction]
fn weyl_blocks(py: Python<'_>, coefficients: [Complex64; 8]) -> PyResult<PyObject> {
    let w = rep::weyl_blocks(&coefficients, &Tolerances::default()).py()?;
    let d = PyDict::new_bound(py);
    for (k, m) in [
        ("s", &w.s_matrix),
        ("t", &w.t_matrix),
        ("w1", &w.w1),
        ("w2", &w.w2),
        ("w3", &w.w3),
    ] {
        d.set_item(k, matrix_rows(m))?;
    }
    d.set_item("sigma", w.sigma)?;
    d.set_item("tau", w.tau)?;
    d.set_item("implied_lambdas", w.implied_lambdas().to_vec())?;
    d.set_item("chained_slacks", w.chained_slacks().to_vec())?;
    Ok(d.into_py(py))
}

#[pyfunction]
fn coleman_split(py: Python<'_>, state: &PyFermionState) -> PyResult<PyObject> {
    let s = rep::coleman_split(&state.inner, &Tolerances::default()).py()?;
    let rel = rep::eigen_relations(&state.inner, &s).py()?;
    let d = PyDict::new_bound(py);
    d.set_item("phi1", s.phi1.clone())?;
    d.set_item("lambda1", s.lambda1)?;
    d.set_item("remainder", PyFermionState::from(s.remainder.clone()).into_py(py))?;
    d.set_item(
        "complement",
        s.complement.clone().map(|c| PyFermionState::from(c).into_py(py)),
    )?;
    d.set_item("strong_orth_residuals", s.strong_orth_residuals.to_vec())?;
    d.set_item("reconstruction_residual", s.reconstruction_residual)?;
    d.set_item("eigen_relations", to_py(py, &rel)?)?;
    Ok(d.into_py(py))
}

#[pyfunction]
fn probe_strong_orthogonality(py: Python<'_>, state: &PyFermionState) -> PyResult<PyObject> {
    to_py(
        py,
        &explorer::probe_strong_orthogonality(&state.inner, &Tolerances::default()).py()?,
    )
}

/// Run a campaign (`"bd"`, `"hole"` or `"conjecture"`) and return its report.
#[pyfunction]
#[pyo3(signature = (campaign, n, r, samples, seed, tolerance = 1e-8))]
fn run_campaign(
    py: Python<'_>,
    campaign: &str,
    n: usize,
    r: usize,
    samples: u64,
    seed: u64,
    tolerance: f64,
) -> PyResult<PyObject> {
    let kind = match campaign {
        "bd" | "bd_necessity" => CampaignKind::BdNecessity,
        "hole" | "hole_duality" => CampaignKind::HoleDuality,
        "conjecture" => CampaignKind::Conjecture,
        other => return Err(PyValueError::new_err(format!("unknown campaign {other:?}"))),
    };
    let cfg = CampaignConfig::new(n, r, samples, seed).with_tolerance(tolerance);
    let report = py.allow_threads(|| explorer::run(kind, &cfg)).py()?;
    to_py(py, &report)
}

#[pymodule]
fn nrep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyFermionState>()?;
    m.add_function(wrap_pyfunction!(check_pauli, m)?)?;
    m.add_function(wrap_pyfunction!(check_bd, m)?)?;
    m.add_function(wrap_pyfunction!(check_two_rep, m)?)?;
    m.add_function(wrap_pyfunction!(check_rank_n_plus_2, m)?)?;
    m.add_function(wrap_pyfunction!(check_weyl_2x2, m)?)?;
    m.add_function(wrap_pyfunction!(construct_bd_preimage, m)?)?;
    m.add_function(wrap_pyfunction!(construct_two_preimage, m)?)?;
    m.add_function(wrap_pyfunction!(natural_form, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(coleman_split, m)?)?;
    m.add_function(wrap_pyfunction!(probe_strong_orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    Ok(())
}
