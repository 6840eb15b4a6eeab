//! Uniform grids and the finite-difference, quadrature and root-location
//! primitives every other module builds on.
//!
//! Derivative stencils (spacing `h`):
//!
//! * first derivative, interior: `(f[i-2] - 8 f[i-1] + 8 f[i+1] - f[i+2]) / 12h`
//! * second derivative, interior: `(-f[i-2] + 16 f[i-1] - 30 f[i] + 16 f[i+1] - f[i+2]) / 12h^2`
//! * the two points at each end use one-sided five-point (first derivative) or
//!   six-point (second derivative) stencils, also fourth order:
//!   `(-25, 48, -36, 16, -3) / 12h` and `(-3, -10, 18, -6, 1) / 12h` for the first
//!   derivative, `(45, -154, 214, -156, 61, -10) / 12h^2` and
//!   `(10, -15, -4, 14, -6, 1) / 12h^2` for the second, mirrored at the right end.
//!
//! Quadrature is composite Simpson; when the point count is even the last three
//! intervals are closed with Simpson's 3/8 rule so the rule stays fourth order.

use std::ops::{Add, Mul, Range, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest admissible grid.
pub const MIN_POINTS: usize = 16;

/// Fraction of the grid trimmed from each end when measuring interior residuals.
pub const EDGE_TRIM: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "bounds must be finite, got [{x_min}, {x_max}]"
            )));
        }
        if x_min >= x_max {
            return Err(Error::InvalidGrid(format!(
                "x_min = {x_min} must be below x_max = {x_max}"
            )));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points, got {n}"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|i| self.x_min + i as f64 * h).collect()
    }

    /// Index range of the central part of the grid with [`EDGE_TRIM`] removed
    /// from both ends.
    pub fn interior(&self) -> Range<usize> {
        let k = ((self.n as f64 * EDGE_TRIM).ceil() as usize).max(2);
        k..self.n - k
    }

    /// Same domain with `n` points.
    pub fn with_points(&self, n: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, n)
    }
}

pub fn make_grid(x_min: f64, x_max: f64, n: usize) -> Result<Grid1D> {
    Grid1D::new(x_min, x_max, n)
}

/// Complex samples on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite sample at x = {}",
                grid.x(i)
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: Grid1D, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid1D, f: F) -> Result<Self> {
        Self::new(grid, (0..grid.len()).map(|i| f(grid.x(i))).collect())
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(grid: Grid1D, f: F) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// Pointwise map; fails if the result is not finite.
    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(
        &self,
        other: &GridFunction,
        f: F,
    ) -> Result<Self> {
        self.check_same_grid(other)?;
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// `sqrt(∫|f|^2 dx)`.
    pub fn l2_norm(&self) -> f64 {
        let density: Vec<Complex64> = self
            .values
            .iter()
            .map(|v| Complex64::new(v.norm_sqr(), 0.0))
            .collect();
        simpson(&density, self.grid.spacing()).re.max(0.0).sqrt()
    }
}

fn first_derivative_slice<T>(f: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = f.len();
    let s = 1.0 / (12.0 * h);
    let mut out = Vec::with_capacity(n);
    out.push((f[1] * 48.0 - f[0] * 25.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * s);
    out.push((f[2] * 18.0 - f[0] * 3.0 - f[1] * 10.0 - f[3] * 6.0 + f[4]) * s);
    for i in 2..n - 2 {
        out.push((f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) * s);
    }
    let m = n - 1;
    out.push((f[m] * 3.0 + f[m - 1] * 10.0 - f[m - 2] * 18.0 + f[m - 3] * 6.0 - f[m - 4]) * s);
    out.push(
        (f[m] * 25.0 - f[m - 1] * 48.0 + f[m - 2] * 36.0 - f[m - 3] * 16.0 + f[m - 4] * 3.0) * s,
    );
    out
}

fn second_derivative_slice<T>(f: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = f.len();
    let s = 1.0 / (12.0 * h * h);
    let edge = |g: [T; 6], w: [f64; 6]| {
        let mut acc = g[0] * w[0];
        for k in 1..6 {
            acc = acc + g[k] * w[k];
        }
        acc * s
    };
    const END0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
    const END1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
    let mut out = Vec::with_capacity(n);
    let head = [f[0], f[1], f[2], f[3], f[4], f[5]];
    out.push(edge(head, END0));
    out.push(edge(head, END1));
    for i in 2..n - 2 {
        out.push(
            (f[i - 1] * 16.0 + f[i + 1] * 16.0 - f[i - 2] - f[i + 2] - f[i] * 30.0) * s,
        );
    }
    let m = n - 1;
    let tail = [f[m], f[m - 1], f[m - 2], f[m - 3], f[m - 4], f[m - 5]];
    out.push(edge(tail, END1));
    out.push(edge(tail, END0));
    out
}

/// Finite-difference derivative of order 1 or 2 (see module docs for stencils).
pub fn derivative(f: &GridFunction, order: u8) -> Result<GridFunction> {
    let h = f.grid.spacing();
    let values = match order {
        1 => first_derivative_slice(&f.values, h),
        2 => second_derivative_slice(&f.values, h),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "derivative order must be 1 or 2, got {order}"
            )))
        }
    };
    GridFunction::new(f.grid, values)
}

/// Real-valued variant of [`derivative`].
pub fn derivative_real(grid: &Grid1D, f: &[f64], order: u8) -> Result<Vec<f64>> {
    if f.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples for a grid of {} points",
            f.len(),
            grid.len()
        )));
    }
    match order {
        1 => Ok(first_derivative_slice(f, grid.spacing())),
        2 => Ok(second_derivative_slice(f, grid.spacing())),
        _ => Err(Error::InvalidArgument(format!(
            "derivative order must be 1 or 2, got {order}"
        ))),
    }
}

fn simpson(f: &[Complex64], h: f64) -> Complex64 {
    let n = f.len();
    let simpson_span = |g: &[Complex64]| {
        let m = g.len();
        let mut acc = g[0] + g[m - 1];
        for (i, v) in g.iter().enumerate().take(m - 1).skip(1) {
            acc += if i % 2 == 1 { v * 4.0 } else { v * 2.0 };
        }
        acc * (h / 3.0)
    };
    if n % 2 == 1 {
        simpson_span(f)
    } else {
        let m = n - 3;
        let tail = &f[m - 1..];
        simpson_span(&f[..m])
            + (tail[0] + tail[1] * 3.0 + tail[2] * 3.0 + tail[3]) * (3.0 * h / 8.0)
    }
}

/// `∫ f dx` over the whole grid.
pub fn integrate(f: &GridFunction) -> Complex64 {
    simpson(&f.values, f.grid.spacing())
}

/// Sign changes of real samples, linearly interpolated, ascending. A sample
/// that is exactly zero is reported once; crossings closer than `h/2` to the
/// previous reported zero are merged into it.
pub fn find_real_zeros(grid: &Grid1D, f: &[f64]) -> Vec<f64> {
    let h = grid.spacing();
    let mut zeros: Vec<f64> = Vec::new();
    let push = |x: f64, zeros: &mut Vec<f64>| {
        if zeros.last().is_none_or(|&last| x - last >= 0.5 * h) {
            zeros.push(x);
        }
    };
    for i in 0..f.len() {
        if f[i] == 0.0 {
            push(grid.x(i), &mut zeros);
            continue;
        }
        if i + 1 < f.len() && f[i] * f[i + 1] < 0.0 {
            let t = f[i] / (f[i] - f[i + 1]);
            push(grid.x(i) + t * h, &mut zeros);
        }
    }
    zeros
}

/// `ln f` with the imaginary part unwrapped to a continuous phase.
pub fn unwrapped_log(f: &GridFunction) -> Result<GridFunction> {
    let mut out = Vec::with_capacity(f.len());
    let mut prev_phase = 0.0;
    for (i, v) in f.values.iter().enumerate() {
        let r = v.norm();
        if r == 0.0 {
            return Err(Error::NodeInSeed {
                x: f.grid.x(i),
                modulus: 0.0,
            });
        }
        let mut phase = v.arg();
        if i > 0 {
            let tau = std::f64::consts::TAU;
            phase += tau * ((prev_phase - phase) / tau).round();
        }
        prev_phase = phase;
        out.push(Complex64::new(r.ln(), phase));
    }
    GridFunction::new(f.grid, out)
}

/// Four-point Lagrange interpolation of grid samples at `x`; `None` outside the grid.
pub fn interpolate(grid: &Grid1D, f: &[Complex64], x: f64) -> Option<Complex64> {
    let h = grid.spacing();
    let t = (x - grid.x_min()) / h;
    let n = grid.len();
    if t < -1e-9 || t > (n - 1) as f64 + 1e-9 {
        return None;
    }
    let nearest = t.round();
    if (t - nearest).abs() < 1e-12 {
        return Some(f[nearest as usize]);
    }
    let i = (t.floor() as usize).clamp(1, n - 3);
    let s = t - i as f64;
    let w = [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ];
    Some(f[i - 1] * w[0] + f[i] * w[1] + f[i + 1] * w[2] + f[i + 2] * w[3])
}
