//! The construction and verification pipeline behind `run` and `verify`.

use num_complex::Complex64;

use crate::analysis::{interlacing_report, pt_check, zero_area, InterlacingReport, SymmetryVerdict, ZeroArea};
use crate::darboux::{
    factorization_defect, map_eigenfunction, missing_state, partner_potential, riccati_residual,
    superpotential_nonlinear, u_function, verify_superpotential_identity, ComplexPotential, MappedState,
};
use crate::ermakov::{build_alpha, ermakov_residual, ErmakovParams};
use crate::error::{Error, Result};
use crate::numerics::{Grid1D, GridFunction};
use crate::seeds::{
    free_particle_seeds, morse_eigenfunction, morse_levels, morse_seeds, numerical_seeds, SeedPair,
    SCHRODINGER_TOL, WRONSKIAN_TOL,
};
use crate::spectral::{
    discretize, eigenvalues_dense, eigenvector, gaussian_probes, state_residual, verify_intertwining,
    DenseOperator, SpectralReport, BOX_ARTIFACT_MASS, RESIDUAL_TOL,
};

use super::config::{Model, RunConfig};

pub const ERMAKOV_TOL: f64 = 1e-4;
pub const RICCATI_TOL: f64 = 1e-4;
pub const SUPERPOTENTIAL_TOL: f64 = 1e-8;
pub const FACTORIZATION_TOL: f64 = 1e-8;
pub const ZERO_AREA_TOL: f64 = 1e-5;
pub const BOUND_IMAG_TOL: f64 = 1e-6;
pub const PAIRING_TOL: f64 = 1e-3;
pub const INTERTWINING_TOL: f64 = 1e-3;
pub const FAULT_RATIO_MIN: f64 = 100.0;
pub const STATE_RESIDUAL_TOL: f64 = 1e-3;
pub const REAL_COLLAPSE_TOL: f64 = 1e-8;
/// Constant added to `beta` for the negative control of the intertwining check.
pub const FAULT_SHIFT: f64 = 0.1;
/// Probe width as a fraction of the domain length.
const PROBE_WIDTH: f64 = 0.02;
/// Closest approach of the central probe to either end, in probe widths.
const PROBE_MARGIN: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, comparison: Comparison::AtMost }
    }

    fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, comparison: Comparison::AtLeast }
    }

    pub fn passed(&self) -> bool {
        match self.comparison {
            Comparison::AtMost => self.value <= self.tolerance,
            Comparison::AtLeast => self.value >= self.tolerance,
        }
    }
}

/// An eigenvalue of `H1` with its residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub energy: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: RunConfig,
    pub params: ErmakovParams,
    /// Whether `b` was derived from the constraint rather than given.
    pub b_derived: bool,
    pub w0: f64,
    pub grid: Grid1D,
    pub partner: ComplexPotential,
    pub spectrum: SpectralReport,
    /// Bound part of the `H1` spectrum, below `continuum`.
    pub bound: Vec<Level>,
    pub h0_levels: Vec<f64>,
    pub continuum: f64,
    /// Missing state followed by the mapped states, in index order.
    pub states: Vec<MappedState>,
    /// Why the missing state was left out, when it was.
    pub missing_note: Option<String>,
    pub zero_area: ZeroArea,
    pub symmetry: SymmetryVerdict,
    pub interlacing: Vec<(usize, InterlacingReport)>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }
}

fn seeds_for(cfg: &RunConfig, grid: Grid1D, v0: &GridFunction) -> Result<SeedPair> {
    match &cfg.model {
        Model::FreeParticle { kappa } => free_particle_seeds(*kappa, grid),
        Model::Morse { gamma, gamma0 } => {
            morse_seeds(&crate::seeds::MorseParams::new(*gamma, *gamma0)?, cfg.epsilon, grid)
        }
        Model::Custom { .. } => numerical_seeds(v0, cfg.epsilon, grid),
    }
}

/// `H0` bound levels and eigenfunctions below the continuum threshold.
fn h0_states(
    cfg: &RunConfig,
    grid: Grid1D,
    op0: &DenseOperator,
    continuum: f64,
) -> Result<Vec<(f64, GridFunction)>> {
    match &cfg.model {
        Model::FreeParticle { .. } => Ok(Vec::new()),
        Model::Morse { gamma, gamma0 } => {
            let p = crate::seeds::MorseParams::new(*gamma, *gamma0)?;
            morse_levels(&p)
                .into_iter()
                .enumerate()
                .filter(|(_, e)| *e < p.gamma0())
                .map(|(n, e)| Ok((e, morse_eigenfunction(&p, n, grid)?)))
                .collect()
        }
        Model::Custom { .. } => {
            let r = eigenvalues_dense(op0)?;
            r.eigenvalues
                .iter()
                .zip(&r.boundary_mass)
                .filter(|(e, m)| e.re < continuum && **m <= BOX_ARTIFACT_MASS)
                .map(|(e, _)| {
                    let mut phi = eigenvector(op0, *e)?;
                    // H0 is real: keep the real part of the phased eigenvector
                    phi = phi.map(|v| Complex64::new(v.re, 0.0))?;
                    let norm = phi.l2_norm();
                    Ok((e.re, phi.map(|v| v / norm)?))
                })
                .collect()
        }
    }
}

/// Largest distance from each expected level to the nearest computed one;
/// infinite when the counts differ.
fn pairing_error(expected: &[f64], bound: &[Level]) -> f64 {
    if expected.len() != bound.len() {
        return f64::INFINITY;
    }
    let mut sorted = expected.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .iter()
        .zip(bound)
        .map(|(e, l)| (l.energy - e).norm())
        .fold(0.0, f64::max)
}

/// Runs the full pipeline. Config problems come back as [`Error::Config`];
/// failed checks do not abort the run and are listed in the report.
pub fn execute(cfg: &RunConfig) -> Result<RunReport> {
    let resolved = cfg.resolve()?;
    let grid = resolved.grid;
    let eps = cfg.epsilon;
    let seed = seeds_for(cfg, grid, &resolved.v0)?;
    let params = cfg.params(seed.w0)?;
    let mut checks = Vec::new();

    checks.push(Check::at_most("seed_wronskian", seed.wronskian_deviation(), WRONSKIAN_TOL));
    let [r1, r2] = seed.schrodinger_residuals()?;
    checks.push(Check::at_most("seed_schrodinger", r1.max(r2), SCHRODINGER_TOL));

    let fam = build_alpha(&seed, params.a, params.b, params.c, params.lambda)?;
    let partner = partner_potential(&fam, eps)?;
    let sp = superpotential_nonlinear(&fam, eps)?;
    let u = u_function(&seed, params.a, params.b, params.c, params.lambda)?;

    checks.push(Check::at_most("ermakov_residual", ermakov_residual(&fam)?, ERMAKOV_TOL));
    checks.push(Check::at_most("riccati_residual", riccati_residual(&sp, &seed.v0)?, RICCATI_TOL));
    checks.push(Check::at_most("superpotential_identity", verify_superpotential_identity(&fam, &u)?, SUPERPOTENTIAL_TOL));
    checks.push(Check::at_most("factorization", factorization_defect(&fam, &u)?, FACTORIZATION_TOL));

    let area = zero_area(&partner);
    checks.push(Check::at_most("zero_area", area.integral.abs(), ZERO_AREA_TOL));
    checks.push(Check::at_most(
        "zero_area_boundary_form",
        (area.integral - area.boundary_form).abs(),
        ZERO_AREA_TOL,
    ));
    if params.lambda == 0.0 {
        checks.push(Check::at_most("real_collapse", partner.v1.max_abs_imag(), REAL_COLLAPSE_TOL));
    }

    let op0 = discretize(&seed.v0, grid)?;
    let op1 = discretize(&partner.v1, grid)?;
    let spectrum = eigenvalues_dense(&op1)?;
    let continuum = resolved.continuum;
    let bound: Vec<Level> = (0..spectrum.eigenvalues.len())
        .filter(|&i| spectrum.eigenvalues[i].re < continuum && spectrum.boundary_mass[i] <= BOX_ARTIFACT_MASS)
        .map(|i| Level { energy: spectrum.eigenvalues[i], residual: spectrum.residuals[i] })
        .collect();
    checks.push(Check::at_most("spectral_residual", spectrum.max_residual(), RESIDUAL_TOL));
    checks.push(Check::at_most(
        "bound_imag",
        bound.iter().map(|l| l.energy.im.abs()).fold(0.0, f64::max),
        BOUND_IMAG_TOL,
    ));

    let h0 = h0_states(cfg, grid, &op0, continuum)?;
    let h0_levels: Vec<f64> = h0.iter().map(|(e, _)| *e).collect();

    let mut states = Vec::new();
    let mut missing_note = None;
    match missing_state(&u) {
        Ok(s) => states.push(s),
        Err(Error::NotNormalizable(why)) => missing_note = Some(why),
        Err(e) => return Err(e),
    }
    for (n, (e, phi)) in h0.iter().enumerate() {
        if *e > eps {
            states.push(map_eigenfunction(phi, n, *e, &sp)?);
        }
    }
    for s in &states {
        checks.push(Check::at_most(
            format!("state_residual_{}", s.index),
            state_residual(&op1, &s.psi, s.energy)?,
            STATE_RESIDUAL_TOL,
        ));
    }

    let mut expected: Vec<f64> = h0_levels.iter().copied().filter(|e| *e > eps).collect();
    if missing_note.is_none() {
        expected.push(eps);
    }
    checks.push(Check::at_most("spectrum_pairing", pairing_error(&expected, &bound), PAIRING_TOL));

    let dv: Vec<f64> = partner.v1.values().iter().zip(seed.v0.values()).map(|(a, b)| (a - b).norm()).collect();
    let width = PROBE_WIDTH * (grid.x_max() - grid.x_min());
    let (lo, hi) = (grid.x_min() + PROBE_MARGIN * width, grid.x_max() - PROBE_MARGIN * width);
    let peak = (0..grid.len())
        .filter(|&i| grid.x(i) >= lo && grid.x(i) <= hi)
        .max_by(|&i, &j| dv[i].total_cmp(&dv[j]))
        .unwrap_or(grid.len() / 2);
    let c0 = grid.x(peak);
    let probes = gaussian_probes(grid, &[c0 - width, c0, c0 + width], width)?;
    let intertwining = verify_intertwining(&op0, &op1, &sp, &probes)?;
    let faulty = verify_intertwining(&op0, &op1, &sp.shifted(Complex64::new(FAULT_SHIFT, 0.0))?, &probes)?;
    checks.push(Check::at_most("intertwining", intertwining, INTERTWINING_TOL));
    checks.push(Check::at_least("intertwining_fault_ratio", faulty / intertwining, FAULT_RATIO_MIN));

    let symmetry = pt_check(&partner, None)?;
    let interlacing = states.iter().filter(|s| s.index > 0).map(|s| (s.index, interlacing_report(s))).collect();

    Ok(RunReport {
        config: cfg.clone(),
        params,
        b_derived: cfg.b.is_none(),
        w0: seed.w0,
        grid,
        partner,
        spectrum,
        bound,
        h0_levels,
        continuum,
        states,
        missing_note,
        zero_area: area,
        symmetry,
        interlacing,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_error_counts() {
        let lv = |e: f64| Level { energy: Complex64::new(e, 0.0), residual: 0.0 };
        assert!((pairing_error(&[1.0, 0.5], &[lv(0.5), lv(1.001)]) - 1e-3).abs() < 1e-12);
        assert!(pairing_error(&[1.0], &[]).is_infinite());
    }

    #[test]
    fn check_directions() {
        assert!(Check::at_most("a", 1.0, 1.0).passed());
        assert!(!Check::at_most("a", f64::NAN, 1.0).passed());
        assert!(Check::at_least("b", 200.0, 100.0).passed());
        assert!(!Check::at_least("b", 50.0, 100.0).passed());
    }
}
