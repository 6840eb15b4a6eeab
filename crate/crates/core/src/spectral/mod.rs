//! Discretized Hamiltonians `-d^2/dx^2 + V` with Dirichlet ends, their full
//! complex spectra, and checks of the intertwining relations.
//!
//! The kinetic term uses the fourth-order five-point stencil
//! `(-psi[i-2] + 16 psi[i-1] - 30 psi[i] + 16 psi[i+1] - psi[i+2]) / (12 h^2)`
//! on the `n - 2` interior points. The ends are pinned to zero and the ghost
//! point beyond each end is the odd reflection of the first interior point,
//! which turns the first and last diagonal coefficient `30` into `29`. The
//! matrix is complex symmetric (`A[i][j] = A[j][i]`), not Hermitian.
//!
//! Eigenvalues of the banded symmetric operator are computed by
//! complex-orthogonal reduction to tridiagonal form and implicit QL. If a
//! rotation in either stage is ill-conditioned the solver falls back to
//! Hessenberg QR on the dense matrix. Each eigenvalue is then paired with a
//! vector from inverse iteration and its residual
//! `||A v - E v|| / (||A||_inf ||v||)`.

mod band;
mod general;
mod tridiagonal;

use num_complex::Complex64;

use crate::darboux::SuperPotential;
use crate::error::{Error, Result};
use crate::numerics::{self, Grid1D, GridFunction};
use band::{Band, BandLu};
use general::{Dense, DenseLu};

/// Largest operator dimension accepted by [`eigenvalues_dense`].
pub const DIMENSION_CAP: usize = 4096;
/// Residual contract for reported eigenpairs.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Fraction of the grid, at each end, counted as boundary region.
pub const BOUNDARY_FRACTION: f64 = 0.02;
/// Boundary mass above which an eigenvector is treated as a box artifact.
pub const BOX_ARTIFACT_MASS: f64 = 0.2;

const INVERSE_ITERATIONS: usize = 3;

#[derive(Debug, Clone)]
enum Storage {
    /// `diags[k][i] = A[i][i + k]`, mirrored below the diagonal.
    SymmetricBand(Vec<Vec<Complex64>>),
    Dense(Vec<Complex64>),
}

/// Square complex operator. Operators from [`discretize`] keep only their
/// band; [`DenseOperator::from_rows`] holds an arbitrary dense matrix.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    dim: usize,
    grid: Option<Grid1D>,
    storage: Storage,
}

/// Which eigenvalue path produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    Tridiagonal,
    Hessenberg,
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Relative residual of each eigenpair.
    pub residuals: Vec<f64>,
    /// Share of `|v|^2` within [`BOUNDARY_FRACTION`] of either end (grid operators only).
    pub boundary_mass: Vec<f64>,
    /// Largest `|Im E|` over all eigenvalues.
    pub max_imag: f64,
    pub path: SolverPath,
}

impl SpectralReport {
    pub fn bound_count(&self, threshold: f64) -> usize {
        bound_spectrum(self, threshold).len()
    }

    /// Largest `|Im E|` among the bound eigenvalues.
    pub fn bound_max_imag(&self, threshold: f64) -> f64 {
        bound_spectrum(self, threshold).iter().map(|e| e.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

impl DenseOperator {
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square and non-empty".into()));
        }
        let a: Vec<Complex64> = rows.iter().flatten().copied().collect();
        if a.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self { dim: n, grid: None, storage: Storage::Dense(a) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> Option<&Grid1D> {
        self.grid.as_ref()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match &self.storage {
            Storage::SymmetricBand(d) => {
                let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                d.get(hi - lo).map_or(Complex64::new(0.0, 0.0), |dk| dk[lo])
            }
            Storage::Dense(a) => a[i * self.dim + j],
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.entry(i, j)).collect()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.storage {
            Storage::SymmetricBand(_) => true,
            Storage::Dense(a) => {
                let n = self.dim;
                (0..n).all(|i| (0..i).all(|j| a[i * n + j] == a[j * n + i]))
            }
        }
    }

    fn bandwidth(&self) -> Option<usize> {
        match &self.storage {
            Storage::SymmetricBand(d) => Some(d.len() - 1),
            Storage::Dense(_) => None,
        }
    }

    /// `A x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        match &self.storage {
            Storage::SymmetricBand(d) => {
                for (k, dk) in d.iter().enumerate() {
                    for i in 0..n.saturating_sub(k) {
                        y[i] += dk[i] * x[i + k];
                        if k > 0 {
                            y[i + k] += dk[i] * x[i];
                        }
                    }
                }
            }
            Storage::Dense(a) => {
                for i in 0..n {
                    y[i] = (0..n).map(|j| a[i * n + j] * x[j]).sum();
                }
            }
        }
        y
    }

    /// Infinity norm.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim;
        match self.bandwidth() {
            Some(kd) => (0..n)
                .map(|i| {
                    let lo = i.saturating_sub(kd);
                    let hi = (i + kd).min(n - 1);
                    (lo..=hi).map(|j| self.entry(i, j).norm()).sum::<f64>()
                })
                .fold(0.0, f64::max),
            None => (0..n).map(|i| (0..n).map(|j| self.entry(i, j).norm()).sum::<f64>()).fold(0.0, f64::max),
        }
    }

    /// Applies the operator to a full-grid function (ends treated as zero) and
    /// returns a full-grid result with zero ends.
    pub fn apply_grid(&self, f: &GridFunction) -> Result<GridFunction> {
        let grid = self
            .grid
            .ok_or_else(|| Error::InvalidArgument("operator has no grid".into()))?;
        if *f.grid() != grid {
            return Err(Error::GridMismatch("function and operator grids differ".into()));
        }
        let n = grid.len();
        let y = self.apply(&f.values()[1..n - 1]);
        let mut out = Vec::with_capacity(n);
        out.push(Complex64::new(0.0, 0.0));
        out.extend(y);
        out.push(Complex64::new(0.0, 0.0));
        GridFunction::new(grid, out)
    }

    fn band_minus(&self, shift: Complex64) -> Option<Band> {
        let Storage::SymmetricBand(d) = &self.storage else { return None };
        let kd = d.len() - 1;
        let n = self.dim;
        let mut b = Band::zeros(n, kd, kd);
        for (k, dk) in d.iter().enumerate() {
            for i in 0..n.saturating_sub(k) {
                let v = if k == 0 { dk[i] - shift } else { dk[i] };
                b.set(i, i + k, v);
                b.set(i + k, i, v);
            }
        }
        Some(b)
    }

    fn dense(&self) -> Dense {
        let n = self.dim;
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(self.entry(i, j));
            }
        }
        Dense { n, a }
    }
}

/// `-d^2/dx^2 + v` on the interior points of `grid` (see module docs).
pub fn discretize(v: &GridFunction, grid: Grid1D) -> Result<DenseOperator> {
    if *v.grid() != grid {
        return Err(Error::GridMismatch("potential and operator grids differ".into()));
    }
    let n = grid.len();
    let m = n - 2;
    let h2 = grid.spacing() * grid.spacing();
    let w = 1.0 / (12.0 * h2);
    let mut d0: Vec<Complex64> = (1..n - 1).map(|i| v.values()[i] + 30.0 * w).collect();
    d0[0] -= w;
    d0[m - 1] -= w;
    let d1 = vec![Complex64::new(-16.0 * w, 0.0); m];
    let d2 = vec![Complex64::new(w, 0.0); m];
    Ok(DenseOperator { dim: m, grid: Some(grid), storage: Storage::SymmetricBand(vec![d0, d1, d2]) })
}

fn deterministic_start(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let t = i as f64;
            Complex64::new(1.0 + 0.3 * (0.7 * t).sin(), 0.2 * (1.3 * t).cos())
        })
        .collect()
}

fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

enum Factor {
    Band(BandLu),
    Dense(DenseLu),
}

impl Factor {
    fn solve(&self, b: &mut [Complex64]) {
        match self {
            Factor::Band(f) => f.solve(b),
            Factor::Dense(f) => f.solve(b),
        }
    }
}

fn factor(op: &DenseOperator, shift: Complex64, tiny: f64) -> Factor {
    match op.band_minus(shift) {
        Some(b) => Factor::Band(BandLu::factor(&b, tiny)),
        None => {
            let mut d = op.dense();
            for i in 0..d.n {
                d.a[i * d.n + i] -= shift;
            }
            Factor::Dense(DenseLu::factor(&d, tiny))
        }
    }
}

/// Inverse iteration at `energy`; returns the unit vector and its residual.
fn inverse_iteration(op: &DenseOperator, energy: Complex64, norm: f64) -> (Vec<Complex64>, f64) {
    let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    let lu = factor(op, energy, tiny);
    let mut v = deterministic_start(op.dim);
    for _ in 0..INVERSE_ITERATIONS {
        lu.solve(&mut v);
        let s = norm2(&v);
        if !(s > 0.0 && s.is_finite()) {
            v = deterministic_start(op.dim);
            break;
        }
        v.iter_mut().for_each(|x| *x /= s);
    }
    let r = residual(op, &v, energy, norm);
    (v, r)
}

fn residual(op: &DenseOperator, v: &[Complex64], energy: Complex64, norm: f64) -> f64 {
    let av = op.apply(v);
    let r: f64 = av.iter().zip(v).map(|(a, x)| (a - energy * x).norm_sqr()).sum::<f64>().sqrt();
    r / (norm.max(f64::MIN_POSITIVE) * norm2(v))
}

/// Rayleigh quotient: `v^T A v / v^T v` for symmetric operators, `v^H A v / v^H v` otherwise.
fn rayleigh(op: &DenseOperator, v: &[Complex64]) -> Complex64 {
    let av = op.apply(v);
    if op.is_symmetric() {
        let num: Complex64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        let den: Complex64 = v.iter().map(|x| x * x).sum();
        if den.norm() > 1e-8 {
            return num / den;
        }
    }
    let num: Complex64 = v.iter().zip(&av).map(|(x, y)| x.conj() * y).sum();
    num / v.iter().map(|x| x.norm_sqr()).sum::<f64>()
}

fn boundary_mass(v: &[Complex64], grid: Option<&Grid1D>) -> f64 {
    let Some(grid) = grid else { return 0.0 };
    let k = ((grid.len() as f64 * BOUNDARY_FRACTION).ceil() as usize).min(v.len() / 2);
    let total: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let edge: f64 = v[..k].iter().chain(&v[v.len() - k..]).map(|x| x.norm_sqr()).sum();
    if total > 0.0 { edge / total } else { 0.0 }
}

fn raw_eigenvalues(op: &DenseOperator) -> Result<(Vec<Complex64>, SolverPath)> {
    if let Storage::SymmetricBand(d) = &op.storage {
        if let Some((diag, off)) = band::symmetric_band_to_tridiagonal(d) {
            if let Ok(ev) = tridiagonal::eigenvalues(diag, off) {
                return Ok((ev, SolverPath::Tridiagonal));
            }
        }
    }
    general::eigenvalues(op.dense())
        .map(|ev| (ev, SolverPath::Hessenberg))
        .map_err(|index| Error::EigenNonConvergence {
            index,
            iterations: general::ITERATIONS_PER_EIGENVALUE,
        })
}

/// Full spectrum of `op` with per-eigenvalue residuals.
pub fn eigenvalues_dense(op: &DenseOperator) -> Result<SpectralReport> {
    if op.dim > DIMENSION_CAP {
        return Err(Error::DimensionCap { dim: op.dim, cap: DIMENSION_CAP });
    }
    let (mut ev, path) = raw_eigenvalues(op)?;
    let norm = op.norm_inf();
    let mut residuals = Vec::with_capacity(ev.len());
    let mut mass = Vec::with_capacity(ev.len());
    for e in ev.iter_mut() {
        let (v, r) = inverse_iteration(op, *e, norm);
        let (v, r) = if r > RESIDUAL_TOL {
            let refined = rayleigh(op, &v);
            let (v2, r2) = inverse_iteration(op, refined, norm);
            if r2 < r {
                *e = refined;
                (v2, r2)
            } else {
                (v, r)
            }
        } else {
            (v, r)
        };
        residuals.push(r);
        mass.push(boundary_mass(&v, op.grid.as_ref()));
    }
    let mut order: Vec<usize> = (0..ev.len()).collect();
    order.sort_by(|&i, &j| ev[i].re.total_cmp(&ev[j].re).then(ev[i].im.total_cmp(&ev[j].im)));
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| ev[i]).collect();
    let max_imag = eigenvalues.iter().map(|e| e.im.abs()).fold(0.0, f64::max);
    Ok(SpectralReport {
        eigenvalues,
        residuals: order.iter().map(|&i| residuals[i]).collect(),
        boundary_mass: order.iter().map(|&i| mass[i]).collect(),
        max_imag,
        path,
    })
}

/// Eigenvalues with `Re E < threshold` whose eigenvectors are not box artifacts.
pub fn bound_spectrum(report: &SpectralReport, threshold: f64) -> Vec<Complex64> {
    report
        .eigenvalues
        .iter()
        .zip(&report.boundary_mass)
        .filter(|(e, m)| e.re < threshold && **m <= BOX_ARTIFACT_MASS)
        .map(|(e, _)| *e)
        .collect()
}

/// Eigenvector for an eigenvalue near `energy`, on the full grid with zero
/// ends, normalized to unit `∫|psi|^2` and phased like the mapped states.
pub fn eigenvector(op: &DenseOperator, energy: Complex64) -> Result<GridFunction> {
    let grid = op
        .grid
        .ok_or_else(|| Error::InvalidArgument("operator has no grid".into()))?;
    let (v, _) = inverse_iteration(op, energy, op.norm_inf());
    let mut full = Vec::with_capacity(grid.len());
    full.push(Complex64::new(0.0, 0.0));
    full.extend(v);
    full.push(Complex64::new(0.0, 0.0));
    let f = GridFunction::new(grid, full)?;
    let norm = f.l2_norm();
    let peak = f
        .values()
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = peak.conj() / peak.norm();
    f.map(|x| x * phase / norm)
}

/// `||H psi - E psi|| / ||psi||` over the interior points of the operator.
pub fn state_residual(op: &DenseOperator, psi: &GridFunction, energy: f64) -> Result<f64> {
    let h = op.apply_grid(psi)?;
    let n = psi.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 1..n - 1 {
        num += (h.values()[i] - psi.values()[i] * energy).norm_sqr();
        den += psi.values()[i].norm_sqr();
    }
    Ok((num / den).sqrt())
}

/// Gaussians `exp(-((x - x_k)/width)^2)` centred at `centers`.
pub fn gaussian_probes(grid: Grid1D, centers: &[f64], width: f64) -> Result<Vec<GridFunction>> {
    centers
        .iter()
        .map(|&c| GridFunction::from_real_fn(grid, |x| (-((x - c) / width).powi(2)).exp()))
        .collect()
}

/// `B f = f' + beta f`.
fn apply_b(sp: &SuperPotential, f: &GridFunction) -> Result<GridFunction> {
    numerics::derivative(f, 1)?.zip_with(&sp.beta, |d, _| d)?.zip_with(
        &f.zip_with(&sp.beta, |v, b| v * b)?,
        |d, bf| d + bf,
    )
}

/// `A f = -f' + beta f`.
fn apply_a(sp: &SuperPotential, f: &GridFunction) -> Result<GridFunction> {
    let d = numerics::derivative(f, 1)?;
    let bf = f.zip_with(&sp.beta, |v, b| v * b)?;
    d.zip_with(&bf, |d, bf| -d + bf)
}

/// Largest of `||(B H0 - H1 B) p|| / ||p||` and `||(H0 A - A H1) p|| / ||p||`
/// over the probes, with `B = d/dx + beta`, `A = -d/dx + beta`.
pub fn verify_intertwining(
    op0: &DenseOperator,
    op1: &DenseOperator,
    sp: &SuperPotential,
    probes: &[GridFunction],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in probes {
        let pn = p.l2_norm();
        if !(pn > 0.0) {
            return Err(Error::InvalidArgument("probe has zero norm".into()));
        }
        let lhs = apply_b(sp, &op0.apply_grid(p)?)?;
        let rhs = op1.apply_grid(&apply_b(sp, p)?)?;
        worst = worst.max(lhs.zip_with(&rhs, |x, y| x - y)?.l2_norm() / pn);
        let lhs = op0.apply_grid(&apply_a(sp, p)?)?;
        let rhs = apply_a(sp, &op1.apply_grid(p)?)?;
        worst = worst.max(lhs.zip_with(&rhs, |x, y| x - y)?.l2_norm() / pn);
    }
    Ok(worst)
}
