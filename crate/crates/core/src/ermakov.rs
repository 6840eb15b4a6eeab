//! Nodeless solutions of the Ermakov equation built from a seed pair:
//! `alpha^2 = a u1^2 + b u1 u2 + c u2^2` with `b^2 - 4ac = -4 lambda^2 / w0^2`.
//!
//! With `beta = -alpha'/alpha + i lambda/alpha^2` solving `-beta' + beta^2 = V0 - eps`,
//! the real part of the Riccati equation gives
//!
//! ```text
//! -alpha'' + V0 alpha = eps alpha - lambda^2 / alpha^3
//! ```
//!
//! which is the form [`ermakov_residual`] measures.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{self, GridFunction};
use crate::seeds::SeedPair;

/// Tolerance on `b^2 - 4ac + 4 lambda^2 / w0^2`, relative to `max(4ac, 1)`.
pub const CONSTRAINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErmakovParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lambda: f64,
}

impl ErmakovParams {
    /// `b^2 - 4ac + 4 lambda^2 / w0^2`.
    pub fn constraint_defect(&self, w0: f64) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c + 4.0 * (self.lambda / w0).powi(2)
    }

    pub fn check_constraint(&self, w0: f64, tol: f64) -> Result<()> {
        let scale = (4.0 * self.a * self.c).max(1.0);
        let defect = self.constraint_defect(w0);
        if !(defect.abs() <= tol * scale) {
            return Err(Error::ConstraintViolated { residual: defect });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ErmakovFamily {
    params: ErmakovParams,
    seed: SeedPair,
    alpha: GridFunction,
    dalpha: GridFunction,
}

/// `b = ±2 sqrt(ac - lambda^2 / w0^2)`; the positive root unless `negative` is set.
pub fn solve_constraint(a: f64, c: f64, lambda: f64, w0: f64, negative: bool) -> Result<f64> {
    if !(a > 0.0 && c > 0.0 && a.is_finite() && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("a and c must be positive, got a={a}, c={c}")));
    }
    if !(w0 != 0.0 && w0.is_finite() && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("need finite lambda and w0 != 0, got {lambda}, {w0}")));
    }
    let ac = a * c;
    let bound = (lambda / w0).powi(2);
    let disc = ac - bound;
    if disc < 0.0 {
        // accept roundoff-level infeasibility, e.g. ac = 1/3 against 4/12
        if disc >= -4.0 * f64::EPSILON * ac.max(bound) {
            return Ok(0.0);
        }
        return Err(Error::ConstraintInfeasible { ac, bound });
    }
    let b = 2.0 * disc.sqrt();
    Ok(if negative { -b } else { b })
}

/// Samples `alpha` and `alpha'` on the seed grid, using the seed derivatives for `alpha'`.
pub fn build_alpha(seed: &SeedPair, a: f64, b: f64, c: f64, lambda: f64) -> Result<ErmakovFamily> {
    if !(a > 0.0 && c > 0.0) {
        return Err(Error::InvalidArgument(format!("a and c must be positive, got a={a}, c={c}")));
    }
    let params = ErmakovParams { a, b, c, lambda };
    params.check_constraint(seed.w0, CONSTRAINT_TOL)?;
    let grid = *seed.grid();
    let scale = [&seed.u1, &seed.u2].iter().map(|u| u.max_abs()).fold(0.0, f64::max);
    if seed.u1.max_abs_imag().max(seed.u2.max_abs_imag()) > 1e-12 * scale {
        return Err(Error::InvalidArgument(
            "seeds must be real-valued; combine complex seeds into a real basis first".into(),
        ));
    }
    let n = grid.len();
    let mut alpha = Vec::with_capacity(n);
    let mut dalpha = Vec::with_capacity(n);
    for i in 0..n {
        let (u1, u2) = (seed.u1.values()[i].re, seed.u2.values()[i].re);
        let (d1, d2) = (seed.du1.values()[i].re, seed.du2.values()[i].re);
        let sq = a * u1 * u1 + b * u1 * u2 + c * u2 * u2;
        if !(sq > 0.0 && sq.is_finite()) {
            return Err(Error::NotPositive { x: grid.x(i), value: sq });
        }
        let al = sq.sqrt();
        let half_d = a * u1 * d1 + 0.5 * b * (d1 * u2 + u1 * d2) + c * u2 * d2;
        alpha.push(Complex64::new(al, 0.0));
        dalpha.push(Complex64::new(half_d / al, 0.0));
    }
    Ok(ErmakovFamily {
        params,
        seed: seed.clone(),
        alpha: GridFunction::new(grid, alpha)?,
        dalpha: GridFunction::new(grid, dalpha)?,
    })
}

impl ErmakovFamily {
    pub fn params(&self) -> ErmakovParams {
        self.params
    }

    pub fn a(&self) -> f64 {
        self.params.a
    }

    pub fn b(&self) -> f64 {
        self.params.b
    }

    pub fn c(&self) -> f64 {
        self.params.c
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    pub fn seed(&self) -> &SeedPair {
        &self.seed
    }

    pub fn alpha(&self) -> &GridFunction {
        &self.alpha
    }

    /// `alpha'` from the seed derivatives.
    pub fn alpha_prime(&self) -> &GridFunction {
        &self.dalpha
    }

    /// `alpha''` from `(alpha^2)'' = 2 (a u1'^2 + b u1' u2' + c u2'^2) + 2 (V0 - eps) alpha^2`,
    /// using `u'' = (V0 - eps) u` for both seeds.
    pub fn alpha_double_prime(&self) -> Result<GridFunction> {
        let ErmakovParams { a, b, c, .. } = self.params;
        let s = &self.seed;
        let values = (0..self.alpha.len())
            .map(|i| {
                let (d1, d2) = (s.du1.values()[i].re, s.du2.values()[i].re);
                let al = self.alpha.values()[i].re;
                let da = self.dalpha.values()[i].re;
                let q = s.v0.values()[i].re - s.epsilon;
                let half_sq = a * d1 * d1 + b * d1 * d2 + c * d2 * d2 + q * al * al;
                Complex64::new((half_sq - da * da) / al, 0.0)
            })
            .collect();
        GridFunction::new(*self.alpha.grid(), values)
    }

    /// `alpha'/alpha`.
    pub fn log_derivative(&self) -> Result<GridFunction> {
        self.dalpha.zip_with(&self.alpha, |d, a| d / a)
    }

    /// Smallest value of `alpha^2` on the grid.
    pub fn alpha_squared_floor(&self) -> f64 {
        self.alpha.values().iter().map(|a| a.re * a.re).fold(f64::INFINITY, f64::min)
    }
}

/// Pointwise `|-alpha'' + V0 alpha - eps alpha + lambda^2/alpha^3| / max(|eps alpha|, 1)`,
/// maximized over the interior. `alpha''` is `alpha [(alpha'/alpha)' + (alpha'/alpha)^2]`
/// with the outer derivative from the fourth-order stencil.
pub fn ermakov_residual(fam: &ErmakovFamily) -> Result<f64> {
    let g = fam.log_derivative()?;
    let dg = numerics::derivative(&g, 1)?;
    let eps = fam.seed.epsilon;
    let l2 = fam.params.lambda * fam.params.lambda;
    let mut worst: f64 = 0.0;
    for i in fam.alpha.grid().interior() {
        let al = fam.alpha.values()[i].re;
        let gi = g.values()[i].re;
        let d2 = al * (dg.values()[i].re + gi * gi);
        let v = fam.seed.v0.values()[i].re;
        let r = -d2 + v * al - eps * al + l2 / (al * al * al);
        worst = worst.max(r.abs() / (eps * al).abs().max(1.0));
    }
    Ok(worst)
}
