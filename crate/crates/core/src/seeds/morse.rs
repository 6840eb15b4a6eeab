//! Morse potential `V0 = G0 (1 - e^{-gamma x})^2`: closed-form seeds at any
//! real `eps < G0`, bound-state levels and eigenfunctions.
//!
//! With `y = 2 d e^{-gamma x}`, `d = sqrt(G0)/gamma`, `sigma = sqrt(G0 - eps)/gamma`:
//!
//! ```text
//! u1 = e^{-y/2} y^{ sigma} M( sigma + 1/2 - d, 1 + 2 sigma, y)
//! u2 = e^{-y/2} y^{-sigma} M(-sigma + 1/2 - d, 1 - 2 sigma, y)
//! W(u1, u2) = 2 sqrt(G0 - eps)
//! ```

use num_complex::Complex64;

use super::{kummer_m, SeedPair};
use crate::error::{Error, Result};
use crate::numerics::{Grid1D, GridFunction};

/// Largest `y` the seeds are evaluated at; `M(., ., y)` grows like `e^y`.
pub const Y_LIMIT: f64 = 600.0;
/// Decay of the slowest state at the right edge of the default domain.
pub const RIGHT_DECAY: f64 = 1e-7;
/// Extra room, in `y`, kept between the classical region and the left edge.
const LEFT_MARGIN_Y: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    gamma: f64,
    gamma0: f64,
}

impl MorseParams {
    pub fn new(gamma: f64, gamma0: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite() && gamma0 > 0.0 && gamma0.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Morse parameters must be positive: gamma={gamma}, Gamma0={gamma0}"
            )));
        }
        if gamma0 <= 0.5 * gamma * gamma {
            return Err(Error::NoBoundState(format!(
                "Gamma0 = {gamma0} must exceed gamma^2/2 = {}",
                0.5 * gamma * gamma
            )));
        }
        Ok(Self { gamma, gamma0 })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn d(&self) -> f64 {
        self.gamma0.sqrt() / self.gamma
    }

    pub fn sigma(&self, epsilon: f64) -> Result<f64> {
        if !(epsilon < self.gamma0) {
            return Err(Error::InvalidArgument(format!(
                "factorization energy {epsilon} must lie below Gamma0 = {}",
                self.gamma0
            )));
        }
        Ok((self.gamma0 - epsilon).sqrt() / self.gamma)
    }

    pub fn y(&self, x: f64) -> f64 {
        2.0 * self.d() * (-self.gamma * x).exp()
    }

    pub fn potential(&self, x: f64) -> f64 {
        let t = 1.0 - (-self.gamma * x).exp();
        self.gamma0 * t * t
    }

    /// Highest level index `N = floor(sqrt(G0)/gamma - 1/2)`.
    pub fn top_level(&self) -> usize {
        (self.d() - 0.5).floor() as usize
    }

    /// Default domain: the left edge sits where `y = 2d + 50` (well inside the
    /// repulsive wall), the right edge where the slowest decay among the top
    /// bound level and `eps` has fallen to [`RIGHT_DECAY`].
    pub fn default_grid(&self, epsilon: f64, n: usize) -> Result<Grid1D> {
        let two_d = 2.0 * self.d();
        let x_min = -((two_d + LEFT_MARGIN_Y) / two_d).ln() / self.gamma;
        let top = self.gamma * (self.d() - self.top_level() as f64 - 0.5);
        let mut slowest = (self.gamma0 - epsilon).max(0.0).sqrt();
        if top > 0.0 {
            slowest = slowest.min(top);
        }
        if !(slowest > 0.0) {
            return Err(Error::InvalidArgument(
                "no decaying state to size the domain from".into(),
            ));
        }
        Grid1D::new(x_min, -RIGHT_DECAY.ln() / slowest, n)
    }
}

/// Bound-state energies `E_n = gamma [(2n+1) sqrt(G0) - gamma (n+1/2)^2]`, `n = 0..=N`.
pub fn morse_levels(params: &MorseParams) -> Vec<f64> {
    let (g, s) = (params.gamma, params.gamma0.sqrt());
    (0..=params.top_level())
        .map(|n| {
            let m = n as f64 + 0.5;
            g * (2.0 * m * s - g * m * m)
        })
        .collect()
}

/// `e^{-y/2} y^s M(a, b, y)` and its `x`-derivative.
fn seed_and_derivative(params: &MorseParams, s: f64, a: f64, b: f64, x: f64) -> Result<(f64, f64)> {
    let y = params.y(x);
    let pre = (-0.5 * y + s * y.ln()).exp();
    let m = kummer_m(a, b, y)?;
    let dm = a / b * kummer_m(a + 1.0, b + 1.0, y)?;
    let u = pre * m;
    // d/dx = -gamma y d/dy
    let du = -params.gamma * pre * ((s - 0.5 * y) * m + y * dm);
    if !(u.is_finite() && du.is_finite()) {
        return Err(Error::Overflow { what: "Morse seed", at: x });
    }
    Ok((u, du))
}

fn check_grid(params: &MorseParams, sigma: f64, grid: &Grid1D) -> Result<()> {
    let y_max = params.y(grid.x_min());
    if y_max > Y_LIMIT {
        return Err(Error::Overflow { what: "Morse seed (y too large at left edge)", at: grid.x_min() });
    }
    let y_min = params.y(grid.x_max());
    if sigma * -y_min.ln() > 650.0 {
        return Err(Error::Overflow { what: "Morse seed (y^-sigma at right edge)", at: grid.x_max() });
    }
    Ok(())
}

pub fn morse_seeds(params: &MorseParams, epsilon: f64, grid: Grid1D) -> Result<SeedPair> {
    let sigma = params.sigma(epsilon)?;
    if sigma == 0.0 {
        return Err(Error::InvalidArgument("eps = Gamma0 gives coincident seeds".into()));
    }
    check_grid(params, sigma, &grid)?;
    let d = params.d();
    let (a1, b1) = (sigma + 0.5 - d, 1.0 + 2.0 * sigma);
    let (a2, b2) = (-sigma + 0.5 - d, 1.0 - 2.0 * sigma);
    let n = grid.len();
    let mut cols: [Vec<Complex64>; 4] = Default::default();
    for c in cols.iter_mut() {
        c.reserve(n);
    }
    for x in grid.points() {
        let (u1, du1) = seed_and_derivative(params, sigma, a1, b1, x)?;
        let (u2, du2) = seed_and_derivative(params, -sigma, a2, b2, x)?;
        for (c, v) in cols.iter_mut().zip([u1, u2, du1, du2]) {
            c.push(Complex64::new(v, 0.0));
        }
    }
    let [u1, u2, du1, du2] = cols;
    SeedPair {
        u1: GridFunction::new(grid, u1)?,
        u2: GridFunction::new(grid, u2)?,
        du1: GridFunction::new(grid, du1)?,
        du2: GridFunction::new(grid, du2)?,
        w0: 2.0 * (params.gamma0 - epsilon).sqrt(),
        epsilon,
        v0: GridFunction::from_real_fn(grid, |x| params.potential(x))?,
    }
    .oriented()
}

/// Normalized bound state `phi_n` (unit `∫ phi^2`), the `u1` seed at `eps = E_n`.
pub fn morse_eigenfunction(params: &MorseParams, n: usize, grid: Grid1D) -> Result<GridFunction> {
    let levels = morse_levels(params);
    let energy = *levels.get(n).ok_or_else(|| {
        Error::InvalidArgument(format!("level {n} does not exist (top level {})", levels.len() - 1))
    })?;
    let sigma = params.sigma(energy)?;
    if sigma <= 0.0 {
        return Err(Error::NoBoundState(format!("level {n} sits at the threshold")));
    }
    check_grid(params, sigma, &grid)?;
    let a = sigma + 0.5 - params.d();
    let b = 1.0 + 2.0 * sigma;
    let mut phi = Vec::with_capacity(grid.len());
    for x in grid.points() {
        phi.push(Complex64::new(seed_and_derivative(params, sigma, a, b, x)?.0, 0.0));
    }
    let f = GridFunction::new(grid, phi)?;
    let norm = f.l2_norm();
    f.map(|v| v / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fig3() -> MorseParams {
        MorseParams::new(1.0, 4.0).unwrap()
    }

    #[test]
    fn derived_constants() {
        let p = fig3();
        assert_abs_diff_eq!(p.d(), 2.0);
        assert_abs_diff_eq!(p.sigma(1.0).unwrap(), 3f64.sqrt(), epsilon = 1e-15);
        let g = p.default_grid(1.0, 2001).unwrap();
        let s = morse_seeds(&p, 1.0, g).unwrap();
        assert_abs_diff_eq!(s.w0, 2.0 * 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn levels() {
        let l = morse_levels(&fig3());
        assert_eq!(l.len(), 2);
        assert_abs_diff_eq!(l[0], 1.75, epsilon = 1e-14);
        assert_abs_diff_eq!(l[1], 3.75, epsilon = 1e-14);

        let l = morse_levels(&MorseParams::new(2.0, 4.0).unwrap());
        assert_eq!(l.len(), 1);
        assert_abs_diff_eq!(l[0], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn levels_increase_and_stay_below_threshold() {
        for &(g, g0) in &[(1.0, 4.0), (0.5, 9.0), (0.3, 20.0), (1.2, 1.0)] {
            let p = MorseParams::new(g, g0).unwrap();
            let l = morse_levels(&p);
            assert!(l.windows(2).all(|w| w[0] < w[1]));
            assert!(l.iter().all(|&e| e <= g0));
        }
    }

    #[test]
    fn rejects_parameters_without_bound_state() {
        assert!(matches!(MorseParams::new(2.0, 1.9), Err(Error::NoBoundState(_))));
        assert!(MorseParams::new(-1.0, 4.0).is_err());
    }

    #[test]
    fn seeds_satisfy_wronskian_and_equation() {
        let p = fig3();
        let g = p.default_grid(1.0, 2001).unwrap();
        let s = morse_seeds(&p, 1.0, g).unwrap();
        assert!(s.wronskian_deviation() <= 1e-6, "{}", s.wronskian_deviation());
        let r = s.schrodinger_residuals().unwrap();
        assert!(r[0] <= 1e-4 && r[1] <= 1e-4, "{r:?}");
    }

    #[test]
    fn seeds_reject_eps_above_threshold_and_huge_y() {
        let p = fig3();
        let g = p.default_grid(1.0, 201).unwrap();
        assert!(morse_seeds(&p, 4.0, g).is_err());
        assert!(morse_seeds(&p, 5.0, g).is_err());
        let wide = Grid1D::new(-6.0, 10.0, 201).unwrap();
        assert!(matches!(morse_seeds(&p, 1.0, wide), Err(Error::Overflow { .. })));
    }

    #[test]
    fn eigenfunctions_are_normalized_bound_states() {
        let p = fig3();
        let g = p.default_grid(1.0, 2001).unwrap();
        for n in 0..2 {
            let phi = morse_eigenfunction(&p, n, g).unwrap();
            assert_abs_diff_eq!(phi.l2_norm(), 1.0, epsilon = 1e-12);
            let edge = phi.values()[0].norm().max(phi.values()[g.len() - 1].norm());
            assert!(edge < 1e-5 * phi.max_abs());
        }
    }
}
