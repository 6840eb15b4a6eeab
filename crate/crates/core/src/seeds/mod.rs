//! Pairs of solutions `u1, u2` of `-u'' + V0 u = eps u` with constant Wronskian
//! `W0 = u1 u2' - u1' u2 > 0`.
//!
//! Every builder also returns the derivative samples `u1'`, `u2'` (analytic for
//! the closed-form seeds, the integrator state for [`numerical_seeds`]); the
//! Ermakov and superpotential constructions use them directly.

mod kummer;
mod morse;

pub use kummer::{kummer_m, ASYMPTOTIC_CROSSOVER};
pub use morse::{morse_eigenfunction, morse_levels, morse_seeds, MorseParams};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{self, Grid1D, GridFunction};

/// Relative Wronskian drift tolerated across the interior.
pub const WRONSKIAN_TOL: f64 = 1e-6;
/// Relative Schrödinger residual tolerated for each seed.
pub const SCHRODINGER_TOL: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct SeedPair {
    pub u1: GridFunction,
    pub u2: GridFunction,
    pub du1: GridFunction,
    pub du2: GridFunction,
    pub w0: f64,
    pub epsilon: f64,
    pub v0: GridFunction,
}

impl SeedPair {
    pub fn grid(&self) -> &Grid1D {
        self.u1.grid()
    }

    /// `u1 u2' - u1' u2` at every grid point.
    pub fn wronskian(&self) -> Vec<Complex64> {
        (0..self.grid().len())
            .map(|i| {
                self.u1.values()[i] * self.du2.values()[i]
                    - self.du1.values()[i] * self.u2.values()[i]
            })
            .collect()
    }

    /// Largest `|W(x)/w0 - 1|` over the interior.
    pub fn wronskian_deviation(&self) -> f64 {
        let w = self.wronskian();
        self.grid()
            .interior()
            .map(|i| (w[i] / self.w0 - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// `||-u'' + (V0 - eps) u||_inf / ||u||_inf` over the interior, for `u1` and `u2`,
    /// with `u''` from the fourth-order stencil.
    pub fn schrodinger_residuals(&self) -> Result<[f64; 2]> {
        let r = |u: &GridFunction| -> Result<f64> {
            let d2 = numerics::derivative(u, 2)?;
            let mut num: f64 = 0.0;
            let mut den: f64 = 0.0;
            for i in self.grid().interior() {
                let v = self.v0.values()[i].re - self.epsilon;
                num = num.max((-d2.values()[i] + u.values()[i] * v).norm());
                den = den.max(u.values()[i].norm());
            }
            Ok(num / den)
        };
        Ok([r(&self.u1)?, r(&self.u2)?])
    }

    /// Checks the pair against [`WRONSKIAN_TOL`] and [`SCHRODINGER_TOL`].
    pub fn validate(&self) -> Result<()> {
        let dev = self.wronskian_deviation();
        if !(dev <= WRONSKIAN_TOL) {
            return Err(Error::InvalidArgument(format!(
                "Wronskian drifts by {dev:e} relative to w0 = {}",
                self.w0
            )));
        }
        let res = self.schrodinger_residuals()?;
        if !(res[0] <= SCHRODINGER_TOL && res[1] <= SCHRODINGER_TOL) {
            return Err(Error::InvalidArgument(format!(
                "seed Schrödinger residuals {:e}, {:e} exceed {SCHRODINGER_TOL:e}",
                res[0], res[1]
            )));
        }
        Ok(())
    }

    /// Ensures `w0 > 0`, swapping the two solutions if necessary.
    fn oriented(mut self) -> Result<Self> {
        if self.w0 == 0.0 || !self.w0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "seeds are linearly dependent (W0 = {})",
                self.w0
            )));
        }
        if self.w0 < 0.0 {
            std::mem::swap(&mut self.u1, &mut self.u2);
            std::mem::swap(&mut self.du1, &mut self.du2);
            self.w0 = -self.w0;
        }
        Ok(self)
    }
}

/// Default free-particle domain `[-28/kappa, 28/kappa]`, where the bound state
/// `e^{-kappa |x| / 2}` has fallen below `1e-6`.
pub fn free_particle_grid(kappa: f64, n: usize) -> Result<Grid1D> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
    }
    Grid1D::new(-28.0 / kappa, 28.0 / kappa, n)
}

/// `u1 = e^{-kappa x / 2}`, `u2 = e^{kappa x / 2}` at `eps = -kappa^2 / 4`, `V0 = 0`.
pub fn free_particle_seeds(kappa: f64, grid: Grid1D) -> Result<SeedPair> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
    }
    let half = 0.5 * kappa;
    let u1 = GridFunction::from_real_fn(grid, |x| (-half * x).exp())?;
    let u2 = GridFunction::from_real_fn(grid, |x| (half * x).exp())?;
    let du1 = u1.map(|v| v * -half)?;
    let du2 = u2.map(|v| v * half)?;
    SeedPair {
        u1,
        u2,
        du1,
        du2,
        w0: kappa,
        epsilon: -0.25 * kappa * kappa,
        v0: GridFunction::from_real_fn(grid, |_| 0.0)?,
    }
    .oriented()
}

const BLOW_UP: f64 = 1e300;

/// RK4 on `(u, u')' = (u', (V0 - eps) u)` from one end of the grid, with the
/// potential at half steps from cubic interpolation. Returns `(u, u')` samples
/// in grid order.
fn integrate_seed(
    grid: &Grid1D,
    v: &[Complex64],
    epsilon: f64,
    start: (f64, f64),
    leftward: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.len();
    let h = if leftward { -grid.spacing() } else { grid.spacing() };
    let potential = |x: f64| numerics::interpolate(grid, v, x).map_or(f64::NAN, |c| c.re) - epsilon;
    let mut u = vec![0.0; n];
    let mut du = vec![0.0; n];
    let idx = |k: usize| if leftward { n - 1 - k } else { k };
    let (mut y, mut yp) = start;
    u[idx(0)] = y;
    du[idx(0)] = yp;
    for k in 0..n - 1 {
        let x = grid.x(idx(k));
        let q0 = v[idx(k)].re - epsilon;
        let qm = potential(x + 0.5 * h);
        let q1 = v[idx(k + 1)].re - epsilon;
        let (k1y, k1p) = (yp, q0 * y);
        let (k2y, k2p) = (yp + 0.5 * h * k1p, qm * (y + 0.5 * h * k1y));
        let (k3y, k3p) = (yp + 0.5 * h * k2p, qm * (y + 0.5 * h * k2y));
        let (k4y, k4p) = (yp + h * k3p, q1 * (y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        yp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if !(y.abs() < BLOW_UP && yp.abs() < BLOW_UP) {
            return Err(Error::IntegrationBlowUp { x: grid.x(idx(k + 1)) });
        }
        u[idx(k + 1)] = y;
        du[idx(k + 1)] = yp;
    }
    Ok((u, du))
}

/// Seeds for an arbitrary real potential sampled on `grid`.
///
/// One solution is integrated left to right from `(u, u') = (1, kappa_L)`, the
/// other right to left from `(1, -kappa_R)`, where
/// `kappa_{L,R} = sqrt(max(V0 - eps, 0))` at the respective end; each starts as
/// the solution that decays outward from its end. Each is scaled to 1 at the
/// grid midpoint (to unit maximum modulus if it sits near a node there), and
/// `w0` is the Wronskian measured at the midpoint.
pub fn numerical_seeds(v0: &GridFunction, epsilon: f64, grid: Grid1D) -> Result<SeedPair> {
    if *v0.grid() != grid {
        return Err(Error::GridMismatch("potential and seed grid differ".into()));
    }
    if !epsilon.is_finite() {
        return Err(Error::InvalidArgument("factorization energy must be finite".into()));
    }
    let scale = v0.max_abs().max(1.0);
    if v0.max_abs_imag() > 1e-14 * scale {
        return Err(Error::InvalidArgument("initial potential must be real".into()));
    }
    let v = v0.values();
    let n = grid.len();
    let kl = (v[0].re - epsilon).max(0.0).sqrt();
    let kr = (v[n - 1].re - epsilon).max(0.0).sqrt();
    let (ua, dua) = integrate_seed(&grid, v, epsilon, (1.0, kl), false)?;
    let (ub, dub) = integrate_seed(&grid, v, epsilon, (1.0, -kr), true)?;

    let mid = n / 2;
    let normalize = |u: Vec<f64>, du: Vec<f64>| -> Result<(GridFunction, GridFunction)> {
        let near = &u[mid.saturating_sub(n / 20)..(mid + n / 20 + 1).min(n)];
        let local = near.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let m = if u[mid].abs() >= 1e-3 * local {
            u[mid]
        } else {
            u.iter().fold(0.0f64, |m, x| m.max(x.abs()))
        };
        let u: Vec<f64> = u.iter().map(|x| x / m).collect();
        let du: Vec<f64> = du.iter().map(|x| x / m).collect();
        Ok((GridFunction::from_real(grid, &u)?, GridFunction::from_real(grid, &du)?))
    };
    let (u1, du1) = normalize(ua, dua)?;
    let (u2, du2) = normalize(ub, dub)?;
    let w0 = (u1.values()[mid] * du2.values()[mid] - du1.values()[mid] * u2.values()[mid]).re;
    SeedPair {
        u1,
        u2,
        du1,
        du2,
        w0,
        epsilon,
        v0: v0.clone(),
    }
    .oriented()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn free_particle_basics() {
        let g = free_particle_grid(1.0, 2001).unwrap();
        let s = free_particle_seeds(1.0, g).unwrap();
        assert_eq!(s.epsilon, -0.25);
        assert_eq!(s.w0, 1.0);
        assert!(s.wronskian_deviation() < 1e-12);
        s.validate().unwrap();

        let g = free_particle_grid(2.0, 2001).unwrap();
        let s = free_particle_seeds(2.0, g).unwrap();
        let mid = g.len() / 2;
        assert_abs_diff_eq!(g.x(mid), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.u1.values()[mid].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.u2.values()[mid].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn free_particle_rejects_nonpositive_kappa() {
        let g = Grid1D::new(-1.0, 1.0, 64).unwrap();
        assert!(free_particle_seeds(0.0, g).is_err());
        assert!(free_particle_seeds(-1.0, g).is_err());
    }

    #[test]
    fn numerical_free_particle_matches_exponentials() {
        let g = free_particle_grid(1.0, 2001).unwrap();
        let v0 = GridFunction::from_real_fn(g, |_| 0.0).unwrap();
        let s = numerical_seeds(&v0, -0.25, g).unwrap();
        let exact = free_particle_seeds(1.0, g).unwrap();
        assert!(s.w0 > 0.0);
        for (num, ana) in [(&s.u1, &exact.u1), (&s.u2, &exact.u2)] {
            let r0 = num.values()[0].re / ana.values()[0].re;
            for i in 0..g.len() {
                let r = num.values()[i].re / ana.values()[i].re;
                assert!((r / r0 - 1.0).abs() < 1e-6);
            }
        }
        assert!(s.wronskian_deviation() < 1e-6);
        assert_abs_diff_eq!(s.w0, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn numerical_harmonic_residual() {
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        let v0 = GridFunction::from_real_fn(g, |x| x * x).unwrap();
        let s = numerical_seeds(&v0, 0.5, g).unwrap();
        let r = s.schrodinger_residuals().unwrap();
        assert!(r[0] <= 1e-4 && r[1] <= 1e-4, "{r:?}");
        assert!(s.wronskian_deviation() < 1e-6, "{}", s.wronskian_deviation());
    }

    #[test]
    fn numerical_seeds_reject_complex_potential() {
        let g = Grid1D::new(-1.0, 1.0, 64).unwrap();
        let v0 = GridFunction::from_fn(g, |x| Complex64::new(x, 0.1)).unwrap();
        assert!(numerical_seeds(&v0, 0.0, g).is_err());
    }

    #[test]
    fn numerical_seeds_report_blow_up() {
        let g = Grid1D::new(0.0, 400.0, 4001).unwrap();
        let v0 = GridFunction::from_real_fn(g, |_| 10.0).unwrap();
        match numerical_seeds(&v0, 0.0, g) {
            Err(Error::IntegrationBlowUp { x }) => assert!(x > 0.0 && x <= 400.0),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }
}
