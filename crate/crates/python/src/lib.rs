//! Python bindings: jobs built from presets or JSON configs, potential and
//! base-function evaluation, transfer matrices, scans and the check suites.

use num_complex::Complex64 as C64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use ssdesign::jobs::{self, Built, JobConfig, JobError};
use ssdesign::scatter::{scattering_coefficients, transfer_matrix, TransferMatrix, DEFAULT_TOL};

create_exception!(ssdesign_py, SsdesignError, PyException, "Raised with `(name, exit_code, message)` arguments.");

fn err(e: JobError) -> PyErr {
    SsdesignError::new_err((e.name(), e.exit_code(), e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| SsdesignError::new_err(("Serialize", 1, e.to_string())))
}

fn load(cfg: JobConfig, l: Option<f64>) -> Result<Built, JobError> {
    let mut cfg = cfg;
    if l.is_some() {
        cfg.truncation.l = l;
    }
    Built::new(&cfg)
}

fn preset_config(name: &str) -> Result<JobConfig, JobError> {
    jobs::preset(name).ok_or_else(|| JobError::Config(format!("unknown preset {name:?}")))
}

fn matrix_tuple(m: &TransferMatrix) -> (C64, C64, C64, C64) {
    (m.m11, m.m12, m.m21, m.m22)
}

/// A constructed potential with its truncation and tolerances.
#[pyclass(frozen, module = "ssdesign_py")]
struct Job {
    built: Built,
}

#[pymethods]
impl Job {
    /// Job from a compiled-in preset, optionally overriding the window half-width.
    #[staticmethod]
    #[pyo3(signature = (name, L = None))]
    #[allow(non_snake_case)]
    fn from_preset(name: &str, L: Option<f64>) -> PyResult<Job> {
        let built = preset_config(name).and_then(|c| load(c, L)).map_err(err)?;
        Ok(Job { built })
    }

    /// Job from a JSON config string.
    #[staticmethod]
    #[pyo3(signature = (text, L = None))]
    #[allow(non_snake_case)]
    fn from_json(text: &str, L: Option<f64>) -> PyResult<Job> {
        let built = JobConfig::from_json(text).and_then(|c| load(c, L)).map_err(err)?;
        Ok(Job { built })
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.built.config.name.clone()
    }

    #[getter]
    #[allow(non_snake_case)]
    fn L(&self) -> f64 {
        self.built.trunc.l
    }

    /// Prescribed `(k, order)` pairs.
    #[getter]
    fn prescribed(&self) -> Vec<(f64, u32)> {
        self.built.constructed.potential.prescribed_ss.iter().map(|p| (p.k, p.order)).collect()
    }

    /// Wavenumbers of the base functions, in order.
    #[getter]
    fn base_wavenumbers(&self) -> Vec<f64> {
        self.built.constructed.potential.provenance.iter().map(|w| w.k).collect()
    }

    fn config_json(&self) -> String {
        self.built.config.to_json()
    }

    /// `U(x)` at each point.
    fn potential(&self, xs: Vec<f64>) -> PyResult<Vec<C64>> {
        let u = &self.built.constructed.potential;
        xs.iter().map(|&x| u.eval(x).map_err(|e| err(e.into()))).collect()
    }

    /// `w_j(x)` at each point, with `j` counted from zero.
    fn base(&self, j: usize, xs: Vec<f64>) -> PyResult<Vec<C64>> {
        let bases = &self.built.constructed.potential.provenance;
        let w = bases
            .get(j)
            .ok_or_else(|| err(JobError::Config(format!("base index {j} out of range (have {})", bases.len()))))?;
        xs.iter().map(|&x| w.eval(x).map_err(|e| err(e.into()))).collect()
    }

    /// `(m11, m12, m21, m22)` at wavenumber `k`.
    fn transfer_matrix(&self, py: Python<'_>, k: f64) -> PyResult<(C64, C64, C64, C64)> {
        let b = &self.built;
        let m = py
            .detach(|| transfer_matrix(&b.constructed.potential, k, &b.trunc, DEFAULT_TOL))
            .map_err(|e| err(e.into()))?;
        Ok(matrix_tuple(&m))
    }

    /// `(T, R^L, R^R)` at wavenumber `k`.
    fn coefficients(&self, py: Python<'_>, k: f64) -> PyResult<(C64, C64, C64)> {
        let b = &self.built;
        let c = py
            .detach(|| {
                transfer_matrix(&b.constructed.potential, k, &b.trunc, DEFAULT_TOL).and_then(|m| scattering_coefficients(&m))
            })
            .map_err(|e| err(e.into()))?;
        Ok((c.t, c.rl, c.rr))
    }

    /// The configured scan as `(k, |T|, |R^L|, |R^R|, m22)` rows.
    fn scan(&self, py: Python<'_>) -> PyResult<Vec<(f64, f64, f64, f64, C64)>> {
        let b = &self.built;
        let pts = py.detach(|| jobs::scan(b)).map_err(err)?;
        Ok(pts
            .iter()
            .map(|p| {
                let c = &p.coefficients;
                (p.k, c.t.norm(), c.rl.norm(), c.rr.norm(), p.matrix.m22)
            })
            .collect())
    }

    /// Located spectral singularities compared with the prescribed set, as JSON.
    fn find_ss(&self, py: Python<'_>) -> PyResult<String> {
        let b = &self.built;
        to_json(&py.detach(|| jobs::find_ss(b)).map_err(err)?)
    }

    /// Full verification suite, as JSON.
    fn verify(&self, py: Python<'_>) -> PyResult<String> {
        let b = &self.built;
        to_json(&py.detach(|| jobs::verify(b)).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "Job(name={:?}, construction={:?}, L={})",
            self.built.config.name,
            self.built.config.construction.kind(),
            self.built.trunc.l
        )
    }
}

/// Names of the compiled-in presets.
#[pyfunction]
fn presets() -> Vec<&'static str> {
    jobs::PRESET_NAMES.to_vec()
}

/// A preset as a JSON config string.
#[pyfunction]
fn preset_json(name: &str) -> PyResult<String> {
    Ok(preset_config(name).map_err(err)?.to_json())
}

#[pymodule]
fn ssdesign_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Job>()?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(preset_json, m)?)?;
    m.add("SsdesignError", m.py().get_type::<SsdesignError>())?;
    Ok(())
}
