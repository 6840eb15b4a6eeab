//! Complex superpotentials, the partner potential `V1 = V0 + 2 beta'` and the
//! eigenfunction map `psi = (phi' + beta phi) / sqrt(E - eps)`.
//!
//! The superpotential comes in two forms that must agree:
//!
//! ```text
//! beta = -alpha'/alpha + i lambda/alpha^2          (nonlinear)
//! beta = -u'/u,  u = a u1 + (b/2 - i lambda/w0) u2  (canonical)
//! ```

use num_complex::Complex64;

use crate::ermakov::{ErmakovFamily, ErmakovParams, CONSTRAINT_TOL};
use crate::error::{Error, Result};
use crate::numerics::{self, GridFunction};
use crate::seeds::SeedPair;

/// `|u|` below this is treated as a node.
pub const NODE_FLOOR: f64 = 1e-12;
/// Required agreement between `V1` and `V0 + 2 beta'`, relative to `max(|V1|, 1)`.
pub const PARTNER_CONSISTENCY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaSource {
    Nonlinear(ErmakovParams),
    Canonical,
}

#[derive(Debug, Clone)]
pub struct SuperPotential {
    pub beta: GridFunction,
    pub epsilon: f64,
    pub source: BetaSource,
}

impl SuperPotential {
    /// Same superpotential shifted by a constant; used as a deliberate fault.
    pub fn shifted(&self, delta: Complex64) -> Result<Self> {
        Ok(Self {
            beta: self.beta.map(|b| b + delta)?,
            epsilon: self.epsilon,
            source: self.source,
        })
    }
}

/// Samples of `u` with, when available, exact derivative samples.
#[derive(Debug, Clone)]
pub struct UFunction {
    pub values: GridFunction,
    pub derivative: Option<GridFunction>,
    pub epsilon: f64,
}

impl UFunction {
    /// Bare samples; `u'` will be taken by finite differences.
    pub fn from_samples(values: GridFunction, epsilon: f64) -> Self {
        Self { values, derivative: None, epsilon }
    }
}

#[derive(Debug, Clone)]
pub struct ComplexPotential {
    pub v1: GridFunction,
    pub v0: GridFunction,
    pub alpha: GridFunction,
    pub epsilon: f64,
    pub params: ErmakovParams,
    pub tag: String,
}

#[derive(Debug, Clone)]
pub struct MappedState {
    pub psi: GridFunction,
    pub energy: f64,
    pub index: usize,
}

pub fn superpotential_nonlinear(fam: &ErmakovFamily, epsilon: f64) -> Result<SuperPotential> {
    check_epsilon(fam.seed(), epsilon)?;
    let lambda = fam.lambda();
    let beta = fam
        .alpha_prime()
        .zip_with(fam.alpha(), |d, a| -d / a + Complex64::new(0.0, lambda / (a.re * a.re)))?;
    Ok(SuperPotential { beta, epsilon, source: BetaSource::Nonlinear(fam.params()) })
}

fn check_epsilon(seed: &SeedPair, epsilon: f64) -> Result<()> {
    if (epsilon - seed.epsilon).abs() > 1e-12 * epsilon.abs().max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon {epsilon} differs from the seed factorization energy {}",
            seed.epsilon
        )));
    }
    Ok(())
}

/// `u = a u1 + (b/2 - i lambda/w0) u2` and its derivative from the seed derivatives.
pub fn u_function(seed: &SeedPair, a: f64, b: f64, c: f64, lambda: f64) -> Result<UFunction> {
    ErmakovParams { a, b, c, lambda }.check_constraint(seed.w0, CONSTRAINT_TOL)?;
    let k = Complex64::new(0.5 * b, -lambda / seed.w0);
    let values = seed.u1.zip_with(&seed.u2, |u1, u2| u1 * a + u2 * k)?;
    let derivative = seed.du1.zip_with(&seed.du2, |d1, d2| d1 * a + d2 * k)?;
    if values.max_abs() == 0.0 {
        return Err(Error::InvalidArgument("u-function vanishes identically".into()));
    }
    Ok(UFunction { values, derivative: Some(derivative), epsilon: seed.epsilon })
}

/// `beta = -u'/u`.
pub fn superpotential_canonical(u: &UFunction) -> Result<SuperPotential> {
    let grid = *u.values.grid();
    for (i, v) in u.values.values().iter().enumerate() {
        if v.norm() < NODE_FLOOR {
            return Err(Error::NodeInSeed { x: grid.x(i), modulus: v.norm() });
        }
    }
    let du = match &u.derivative {
        Some(d) => {
            u.values.check_same_grid(d)?;
            d.clone()
        }
        None => numerics::derivative(&u.values, 1)?,
    };
    let beta = du.zip_with(&u.values, |d, v| -d / v)?;
    Ok(SuperPotential { beta, epsilon: u.epsilon, source: BetaSource::Canonical })
}

/// Sixth-order central first derivative at `i` (needs three neighbours each side).
fn central6(f: &[Complex64], h: f64, i: usize) -> Complex64 {
    (-f[i - 3] + f[i - 2] * 9.0 - f[i - 1] * 45.0 + f[i + 1] * 45.0 - f[i + 2] * 9.0 + f[i + 3]) / (60.0 * h)
}

/// Fourth-order central first derivative at `i`.
fn central4(f: &[Complex64], h: f64, i: usize) -> Complex64 {
    (f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) / (12.0 * h)
}

/// `V1 = V0 - 2 (ln alpha)'' + i (2 lambda / alpha^2)'`, with `alpha'` and
/// `alpha''` from the seeds, certified on the interior against `V0 + 2 beta'`
/// where `beta'` is a sixth-order finite difference of the sampled `beta`.
/// The allowed gap is [`PARTNER_CONSISTENCY_TOL`] plus the local difference
/// between the fourth- and sixth-order estimates of `2 beta'`, so coarse grids
/// are not rejected for truncation error.
pub fn partner_potential(fam: &ErmakovFamily, epsilon: f64) -> Result<ComplexPotential> {
    let sp = superpotential_nonlinear(fam, epsilon)?;
    let grid = *fam.alpha().grid();
    let lambda = fam.lambda();
    let d2 = fam.alpha_double_prime()?;
    let v0 = &fam.seed().v0;
    let values: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let al = fam.alpha().values()[i].re;
            let g = fam.alpha_prime().values()[i].re / al;
            let ln_pp = d2.values()[i].re / al - g * g;
            Complex64::new(v0.values()[i].re - 2.0 * ln_pp, -4.0 * lambda * g / (al * al))
        })
        .collect();
    let v1 = GridFunction::new(grid, values)?;

    let h = grid.spacing();
    let range = grid.interior();
    for i in range.start.max(3)..range.end.min(grid.len() - 3) {
        let d6 = central6(sp.beta.values(), h, i);
        let truncation = 2.0 * (d6 - central4(sp.beta.values(), h, i)).norm();
        let other = v0.values()[i] + d6 * 2.0;
        let here = v1.values()[i];
        if (here - other).norm() > PARTNER_CONSISTENCY_TOL * here.norm().max(1.0) + truncation {
            return Err(Error::InvalidArgument(format!(
                "V1 and V0 + 2 beta' disagree by {:e} at x = {}",
                (here - other).norm(),
                grid.x(i)
            )));
        }
    }
    let p = fam.params();
    Ok(ComplexPotential {
        v1,
        v0: v0.clone(),
        alpha: fam.alpha().clone(),
        epsilon,
        params: p,
        tag: format!("a={} b={} c={} lambda={} epsilon={}", p.a, p.b, p.c, p.lambda, epsilon),
    })
}

/// Pointwise `|-beta' + beta^2 - V0 + eps| / max(|V0 - eps|, 1)`, maximized over the interior.
pub fn riccati_residual(sp: &SuperPotential, v0: &GridFunction) -> Result<f64> {
    sp.beta.check_same_grid(v0)?;
    let db = numerics::derivative(&sp.beta, 1)?;
    let mut worst: f64 = 0.0;
    for i in v0.grid().interior() {
        let b = sp.beta.values()[i];
        let shifted = v0.values()[i] - sp.epsilon;
        let r = -db.values()[i] + b * b - shifted;
        worst = worst.max(r.norm() / shifted.norm().max(1.0));
    }
    Ok(worst)
}

/// Normalizes to unit `∫|psi|^2` and rotates so the largest-modulus sample is real positive.
fn normalize_phase(psi: GridFunction) -> Result<GridFunction> {
    let norm = psi.l2_norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidArgument("state has zero or non-finite norm".into()));
    }
    let peak = psi
        .values()
        .iter()
        .copied()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = peak.conj() / peak.norm();
    psi.map(|v| v * phase / norm)
}

/// `psi_{n+1} = (phi_n' + beta phi_n) / sqrt(E_n - eps)`, normalized, labelled `n + 1`.
pub fn map_eigenfunction(phi_n: &GridFunction, n: usize, e_n: f64, sp: &SuperPotential) -> Result<MappedState> {
    if !(e_n > sp.epsilon) {
        return Err(Error::EnergyOrdering { energy: e_n, epsilon: sp.epsilon });
    }
    phi_n.check_same_grid(&sp.beta)?;
    let dphi = numerics::derivative(phi_n, 1)?;
    let scale = 1.0 / (e_n - sp.epsilon).sqrt();
    let mut values = Vec::with_capacity(phi_n.len());
    for i in 0..phi_n.len() {
        values.push((dphi.values()[i] + sp.beta.values()[i] * phi_n.values()[i]) * scale);
    }
    let psi = normalize_phase(GridFunction::new(*phi_n.grid(), values)?)?;
    Ok(MappedState { psi, energy: e_n, index: n + 1 })
}

/// Largest share of `∫|1/u|^2` allowed in the outer 2% at either end of the grid.
const MISSING_OUTER_MASS: f64 = 0.2;
/// Largest edge density of `|1/u|^2` allowed relative to its peak.
const MISSING_EDGE_DENSITY: f64 = 1e-3;

/// `psi_0 ∝ 1/u`, annihilated by `A = -d/dx + beta` with `beta = -u'/u`; energy `eps`.
pub fn missing_state(u: &UFunction) -> Result<MappedState> {
    let grid = *u.values.grid();
    let mut inv = Vec::with_capacity(grid.len());
    for (i, v) in u.values.values().iter().enumerate() {
        if v.norm() < NODE_FLOOR {
            return Err(Error::NodeInSeed { x: grid.x(i), modulus: v.norm() });
        }
        inv.push(1.0 / v);
    }
    let density: Vec<f64> = inv.iter().map(|v| v.norm_sqr()).collect();
    let n = grid.len();
    let k = (n / 50).max(1);
    let total: f64 = density.iter().sum();
    let outer: f64 = density[..k].iter().chain(&density[n - k..]).sum();
    let peak = density.iter().copied().fold(0.0, f64::max);
    let edge = density[0].max(density[n - 1]);
    if outer > MISSING_OUTER_MASS * total {
        return Err(Error::NotNormalizable(format!(
            "{:.1}% of the mass lies in the outer 2% at either end of the grid",
            100.0 * outer / total
        )));
    }
    if edge > MISSING_EDGE_DENSITY * peak {
        return Err(Error::NotNormalizable(format!(
            "edge density is {:e} of the peak",
            edge / peak
        )));
    }
    let psi = normalize_phase(GridFunction::new(grid, inv)?)?;
    Ok(MappedState { psi, energy: u.epsilon, index: 0 })
}

/// Largest pointwise `|beta_nonlinear - beta_canonical|`.
pub fn verify_superpotential_identity(fam: &ErmakovFamily, u: &UFunction) -> Result<f64> {
    let nl = superpotential_nonlinear(fam, fam.seed().epsilon)?;
    let can = superpotential_canonical(u)?;
    nl.beta.check_same_grid(&can.beta)?;
    Ok(nl
        .beta
        .values()
        .iter()
        .zip(can.beta.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Largest pointwise `||u|^2 / (a alpha^2) - 1|`.
pub fn factorization_defect(fam: &ErmakovFamily, u: &UFunction) -> Result<f64> {
    fam.alpha().check_same_grid(&u.values)?;
    Ok(fam
        .alpha()
        .values()
        .iter()
        .zip(u.values.values())
        .map(|(al, uv)| (uv.norm_sqr() / (fam.a() * al.re * al.re) - 1.0).abs())
        .fold(0.0, f64::max))
}
