//! Python bindings: run presets and configs, inspect reports, and call the
//! main numerical building blocks.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use engine::cli::{self, output, RunConfig};
use engine::darboux::partner_potential;
use engine::ermakov::{build_alpha, solve_constraint as solve};
use engine::seeds::{free_particle_grid, free_particle_seeds, MorseParams};
use engine::spectral::{eigenvalues_dense, DenseOperator};
use engine::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config(_)
        | Error::InvalidArgument(_)
        | Error::InvalidGrid(_)
        | Error::ConstraintInfeasible { .. }
        | Error::ConstraintViolated { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Result of a pipeline run.
#[pyclass(frozen, module = "ermakov_susy")]
struct Report {
    inner: cli::RunReport,
}

#[pymethods]
impl Report {
    /// True when every check passed.
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// CLI exit status for this report: 0 or 1.
    #[getter]
    fn exit_code(&self) -> u8 {
        if self.inner.passed() { cli::EXIT_OK } else { cli::EXIT_CHECK_FAILED }
    }

    /// `(name, value, tolerance, passed)` for each check.
    #[getter]
    fn checks(&self) -> Vec<(String, f64, f64, bool)> {
        self.inner
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.value, c.tolerance, c.passed()))
            .collect()
    }

    /// Bound eigenvalues of the partner Hamiltonian.
    #[getter]
    fn bound(&self) -> Vec<Complex64> {
        self.inner.bound.iter().map(|l| l.energy).collect()
    }

    /// Every eigenvalue of the discretized partner Hamiltonian.
    #[getter]
    fn eigenvalues(&self) -> Vec<Complex64> {
        self.inner.spectrum.eigenvalues.clone()
    }

    #[getter]
    fn h0_levels(&self) -> Vec<f64> {
        self.inner.h0_levels.clone()
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.grid.points()
    }

    #[getter]
    fn v0(&self) -> Vec<f64> {
        self.inner.partner.v0.re()
    }

    #[getter]
    fn v1(&self) -> Vec<Complex64> {
        self.inner.partner.v1.values().to_vec()
    }

    /// `(index, energy, psi)` for the missing state and each mapped state.
    #[getter]
    fn states(&self) -> Vec<(usize, f64, Vec<Complex64>)> {
        self.inner
            .states
            .iter()
            .map(|s| (s.index, s.energy, s.psi.values().to_vec()))
            .collect()
    }

    /// `(a, b, c, lambda)` actually used.
    #[getter]
    fn params(&self) -> (f64, f64, f64, f64) {
        let p = self.inner.params;
        (p.a, p.b, p.c, p.lambda)
    }

    #[getter]
    fn w0(&self) -> f64 {
        self.inner.w0
    }

    /// `(integral, boundary_form)` of the imaginary part of the partner.
    #[getter]
    fn zero_area(&self) -> (f64, f64) {
        (self.inner.zero_area.integral, self.inner.zero_area.boundary_form)
    }

    /// `(is_pt_symmetric, best_shift, deviation)`.
    #[getter]
    fn symmetry(&self) -> (bool, f64, f64) {
        let s = self.inner.symmetry;
        (s.is_pt_symmetric, s.best_shift, s.deviation)
    }

    fn summary(&self) -> String {
        output::summary(&self.inner)
    }

    /// Writes the configured CSV outputs and `summary.txt`; returns the paths.
    fn write(&self, out_dir: PathBuf) -> PyResult<Vec<PathBuf>> {
        output::write_outputs(&self.inner, &out_dir).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(passed={}, bound={}, checks={})",
            self.inner.passed(),
            self.inner.bound.len(),
            self.inner.checks.len()
        )
    }
}

fn execute(py: Python<'_>, cfg: RunConfig) -> PyResult<Report> {
    py.detach(|| cli::execute(&cfg)).map(|inner| Report { inner }).map_err(to_py)
}

/// TOML text of a built-in preset: fig1, fig1-shifted, fig3 or fig3-alt.
#[pyfunction]
fn preset_config(name: &str) -> PyResult<String> {
    cli::preset(name).and_then(|c| c.to_toml()).map_err(to_py)
}

/// Runs a built-in preset.
#[pyfunction]
fn run_preset(py: Python<'_>, name: &str) -> PyResult<Report> {
    execute(py, cli::preset(name).map_err(to_py)?)
}

/// Runs a config given as TOML text.
#[pyfunction]
fn run_config(py: Python<'_>, toml: &str) -> PyResult<Report> {
    execute(py, RunConfig::from_toml(toml).map_err(to_py)?)
}

/// Runs a config file; relative sample paths resolve against its directory.
#[pyfunction]
fn run_file(py: Python<'_>, path: PathBuf) -> PyResult<Report> {
    execute(py, RunConfig::load(&path).map_err(to_py)?)
}

/// `b` from `b^2 - 4ac = -4 lambda^2 / w0^2`.
#[pyfunction]
#[pyo3(signature = (a, c, lam, w0, negative=false))]
fn solve_constraint(a: f64, c: f64, lam: f64, w0: f64, negative: bool) -> PyResult<f64> {
    solve(a, c, lam, w0, negative).map_err(to_py)
}

/// Bound-state energies of the Morse potential `gamma0 (1 - e^{-gamma x})^2`.
#[pyfunction]
fn morse_levels(gamma: f64, gamma0: f64) -> PyResult<Vec<f64>> {
    Ok(engine::seeds::morse_levels(&MorseParams::new(gamma, gamma0).map_err(to_py)?))
}

/// Confluent hypergeometric function `1F1(a; b; z)`.
#[pyfunction]
fn kummer_m(a: f64, b: f64, z: f64) -> PyResult<f64> {
    engine::seeds::kummer_m(a, b, z).map_err(to_py)
}

/// `(x, V1)` for the free-particle family with `eps = -kappa^2/4`; `b` is
/// derived from the constraint when omitted.
#[pyfunction]
#[pyo3(signature = (kappa, a, c, lam, b=None, n=2001))]
fn free_particle_partner(
    kappa: f64,
    a: f64,
    c: f64,
    lam: f64,
    b: Option<f64>,
    n: usize,
) -> PyResult<(Vec<f64>, Vec<Complex64>)> {
    let grid = free_particle_grid(kappa, n).map_err(to_py)?;
    let seed = free_particle_seeds(kappa, grid).map_err(to_py)?;
    let b = match b {
        Some(b) => b,
        None => solve(a, c, lam, seed.w0, false).map_err(to_py)?,
    };
    let fam = build_alpha(&seed, a, b, c, lam).map_err(to_py)?;
    let v1 = partner_potential(&fam, seed.epsilon).map_err(to_py)?;
    Ok((grid.points(), v1.v1.values().to_vec()))
}

/// Eigenvalues of a square complex matrix, sorted by real then imaginary part.
#[pyfunction]
fn eigenvalues(py: Python<'_>, matrix: Vec<Vec<Complex64>>) -> PyResult<Vec<Complex64>> {
    let op = DenseOperator::from_rows(&matrix).map_err(to_py)?;
    py.detach(|| eigenvalues_dense(&op)).map(|r| r.eigenvalues).map_err(to_py)
}

#[pymodule]
fn ermakov_susy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(preset_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_preset, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_file, m)?)?;
    m.add_function(wrap_pyfunction!(solve_constraint, m)?)?;
    m.add_function(wrap_pyfunction!(morse_levels, m)?)?;
    m.add_function(wrap_pyfunction!(kummer_m, m)?)?;
    m.add_function(wrap_pyfunction!(free_particle_partner, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add("PRESETS", cli::PRESETS.to_vec())?;
    Ok(())
}
