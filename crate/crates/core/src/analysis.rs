//! Diagnostics on constructed partners: zero total area of `Im V1`, PT
//! symmetry about a (possibly shifted) centre, and zero interlacing of mapped
//! states.

use num_complex::Complex64;

use crate::darboux::{ComplexPotential, MappedState};
use crate::error::{Error, Result};
use crate::numerics::{self, Grid1D};

/// Deviation at or below which a potential is classified PT-symmetric.
pub const PT_TOL: f64 = 1e-6;
/// Fraction of the peak modulus below which zeros are ignored by the interlacing report.
pub const INTERLACING_FLOOR: f64 = 1e-4;

const COARSE_SHIFTS: usize = 201;
const REFINE_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroArea {
    /// `∫ Im V1 dx` by quadrature.
    pub integral: f64,
    /// `2 lambda / alpha^2` evaluated between the ends of the grid.
    pub boundary_form: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryVerdict {
    pub is_pt_symmetric: bool,
    pub best_shift: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingReport {
    pub re_zeros: Vec<f64>,
    pub im_zeros: Vec<f64>,
    /// `None` when the imaginary part has no zeros (real states).
    pub alternates: Option<bool>,
}

pub fn zero_area(v1: &ComplexPotential) -> ZeroArea {
    let im = v1.v1.map(|v| Complex64::new(v.im, 0.0)).expect("imaginary part of finite samples is finite");
    let integral = numerics::integrate(&im).re;
    let a = v1.alpha.values();
    let lambda = v1.params.lambda;
    let end = |al: Complex64| 2.0 * lambda / (al.re * al.re);
    ZeroArea { integral, boundary_form: end(a[a.len() - 1]) - end(a[0]) }
}

/// `V` at `x`, by cubic interpolation inside the grid and continued by its
/// edge value outside.
fn sample(grid: &Grid1D, v: &[Complex64], x: f64) -> Complex64 {
    if x <= grid.x_min() {
        v[0]
    } else if x >= grid.x_max() {
        v[v.len() - 1]
    } else {
        numerics::interpolate(grid, v, x).unwrap_or(v[0])
    }
}

/// `max_s |V(x0 + s) - conj V(x0 - s)|` with `s` reaching both ends of the grid.
fn deviation_at(grid: &Grid1D, v: &[Complex64], x0: f64) -> f64 {
    let h = grid.spacing();
    let reach = (x0 - grid.x_min()).max(grid.x_max() - x0);
    let steps = (reach / h).ceil() as usize;
    let mut worst: f64 = 0.0;
    for k in 0..=steps {
        let s = k as f64 * h;
        worst = worst.max((sample(grid, v, x0 + s) - sample(grid, v, x0 - s).conj()).norm());
    }
    worst
}

/// PT-symmetry test about `shift`, or about the best centre in the central
/// half of the grid when `shift` is `None` (coarse scan, then golden-section
/// refinement around the best coarse point).
pub fn pt_check(v1: &ComplexPotential, shift: Option<f64>) -> Result<SymmetryVerdict> {
    let grid = *v1.v1.grid();
    let v = v1.v1.values();
    let (best_shift, deviation) = match shift {
        Some(x0) => {
            if !(x0 > grid.x_min() && x0 < grid.x_max()) {
                return Err(Error::InvalidArgument(format!("shift {x0} lies outside the grid")));
            }
            (x0, deviation_at(&grid, v, x0))
        }
        None => {
            let len = grid.x_max() - grid.x_min();
            let lo = grid.x_min() + 0.25 * len;
            let hi = grid.x_max() - 0.25 * len;
            let step = (hi - lo) / (COARSE_SHIFTS - 1) as f64;
            let mut best = (lo, f64::INFINITY);
            for k in 0..COARSE_SHIFTS {
                let x0 = lo + k as f64 * step;
                let d = deviation_at(&grid, v, x0);
                if d < best.1 {
                    best = (x0, d);
                }
            }
            let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            let mut c = b - phi * (b - a);
            let mut d = a + phi * (b - a);
            let (mut fc, mut fd) = (deviation_at(&grid, v, c), deviation_at(&grid, v, d));
            for _ in 0..REFINE_STEPS {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    fc = deviation_at(&grid, v, c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    fd = deviation_at(&grid, v, d);
                }
                if b - a < 1e-12 * len {
                    break;
                }
            }
            let (x, f) = if fc < fd { (c, fc) } else { (d, fd) };
            if f < best.1 { (x, f) } else { best }
        }
    };
    Ok(SymmetryVerdict { is_pt_symmetric: deviation <= PT_TOL, best_shift, deviation })
}

/// Zeros of `Re psi` and `Im psi` between the first and last points where
/// `|psi| > 1e-4 max|psi|`, and whether the two sets strictly alternate.
pub fn interlacing_report(state: &MappedState) -> InterlacingReport {
    let psi = &state.psi;
    let grid = *psi.grid();
    let floor = INTERLACING_FLOOR * psi.max_abs();
    let above: Vec<usize> = (0..psi.len()).filter(|&i| psi.values()[i].norm() > floor).collect();
    let (lo, hi) = match (above.first(), above.last()) {
        (Some(&a), Some(&b)) => (grid.x(a), grid.x(b)),
        _ => (f64::INFINITY, f64::NEG_INFINITY),
    };
    let keep = |x: f64| x >= lo && x <= hi;
    // a part that vanishes to roundoff has no zeros to report
    let zeros = |part: Vec<f64>| -> Vec<f64> {
        if part.iter().all(|v| v.abs() <= 1e-12 * psi.max_abs()) {
            return Vec::new();
        }
        numerics::find_real_zeros(&grid, &part).into_iter().filter(|&x| keep(x)).collect()
    };
    let re_zeros = zeros(psi.re());
    let im_zeros = zeros(psi.im());
    let alternates = if im_zeros.is_empty() {
        None
    } else {
        let mut all: Vec<(f64, bool)> =
            re_zeros.iter().map(|&x| (x, true)).chain(im_zeros.iter().map(|&x| (x, false))).collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        Some(all.windows(2).all(|w| w[0].1 != w[1].1))
    };
    InterlacingReport { re_zeros, im_zeros, alternates }
}
