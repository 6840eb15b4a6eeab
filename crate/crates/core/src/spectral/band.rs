//! Band storage, band LU with partial pivoting, and reduction of a complex
//! symmetric band matrix to tridiagonal form by complex-orthogonal rotations.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// General band matrix: entry `(i, j)` is stored when `-lower <= j - i <= upper`.
#[derive(Debug, Clone)]
pub(crate) struct Band {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<Complex64>,
}

impl Band {
    pub(crate) fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        Self { n, lower, upper, data: vec![ZERO; n * (lower + upper + 1)] }
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.lower >= i && j <= i + self.upper
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.lower + self.upper + 1) + (j + self.lower - i)
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> Complex64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            ZERO
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(self.in_band(i, j));
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }
}

/// LU factors of a band matrix (LAPACK `gbtrf` layout: `U` gains `lower` extra superdiagonals).
pub(crate) struct BandLu {
    lu: Band,
    pivots: Vec<usize>,
}

impl BandLu {
    /// Factors `a`; exactly singular pivots are replaced by `tiny` so inverse
    /// iteration at an exact eigenvalue still proceeds.
    pub(crate) fn factor(a: &Band, tiny: f64) -> Self {
        let n = a.n;
        let kl = a.lower;
        let ku = a.upper + a.lower;
        let mut lu = Band::zeros(n, kl, ku);
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + a.upper).min(n - 1);
            for j in lo..=hi {
                lu.set(i, j, a.get(i, j));
            }
        }
        let mut pivots = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.get(k, k).norm();
            for i in k + 1..=last {
                let m = lu.get(i, k).norm();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            pivots[k] = p;
            let right = (k + ku).min(n - 1);
            if p != k {
                for j in k..=right {
                    let t = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, t);
                }
            }
            if lu.get(k, k).norm() == 0.0 {
                lu.set(k, k, Complex64::new(tiny, 0.0));
            }
            let piv = lu.get(k, k);
            for i in k + 1..=last {
                let l = lu.get(i, k) / piv;
                lu.set(i, k, l);
                if l != ZERO {
                    for j in k + 1..=right {
                        let v = lu.get(i, j) - l * lu.get(k, j);
                        lu.set(i, j, v);
                    }
                }
            }
        }
        Self { lu, pivots }
    }

    pub(crate) fn solve(&self, b: &mut [Complex64]) {
        let n = self.lu.n;
        let kl = self.lu.lower;
        let ku = self.lu.upper;
        for k in 0..n {
            b.swap(k, self.pivots[k]);
            let bk = b[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                b[i] -= self.lu.get(i, k) * bk;
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + ku).min(n - 1) {
                s -= self.lu.get(k, j) * b[j];
            }
            b[k] = s / self.lu.get(k, k);
        }
    }
}

/// Rotation magnitude past which the complex-orthogonal reduction is abandoned.
const GROWTH_LIMIT: f64 = 1e4;

/// Reduces a complex symmetric matrix with `kd` stored superdiagonals
/// (`diags[k][i] = A[i][i + k]`) to tridiagonal form `(d, e)` with
/// `Q A Q^T`, `Q Q^T = I`. Returns `None` when a rotation is ill-conditioned.
pub(crate) fn symmetric_band_to_tridiagonal(
    diags: &[Vec<Complex64>],
) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
    let n = diags[0].len();
    let kd = diags.len() - 1;
    let w = kd + 1;
    let mut a = Band::zeros(n, w, w);
    for (k, dk) in diags.iter().enumerate() {
        for (i, &v) in dk.iter().enumerate() {
            if i + k < n {
                a.set(i, i + k, v);
                a.set(i + k, i, v);
            }
        }
    }
    if kd >= 2 {
        for j in 0..n.saturating_sub(2) {
            for k0 in ((j + 2)..=(j + kd).min(n - 1)).rev() {
                let (mut r, mut c) = (k0, j);
                loop {
                    let x = a.get(r - 1, c);
                    let y = a.get(r, c);
                    if y != ZERO {
                        let rr = (x * x + y * y).sqrt();
                        if rr.norm() <= f64::EPSILON * (x.norm() + y.norm()) {
                            return None;
                        }
                        let (cs, sn) = (x / rr, y / rr);
                        if cs.norm() > GROWTH_LIMIT || sn.norm() > GROWTH_LIMIT {
                            return None;
                        }
                        rotate(&mut a, r - 1, r, cs, sn);
                        a.set(r, c, ZERO);
                        a.set(c, r, ZERO);
                    }
                    // the rotation in (r-1, r) spills into (r + kd, r - 1)
                    let next = r + kd;
                    if next >= n || a.get(next, r - 1) == ZERO {
                        break;
                    }
                    c = r - 1;
                    r = next;
                }
            }
        }
    }
    let d = (0..n).map(|i| a.get(i, i)).collect();
    let e = (0..n).map(|i| if i + 1 < n { a.get(i + 1, i) } else { ZERO }).collect();
    Some((d, e))
}

/// `A <- G A G^T` with `G` acting on indices `(p, q)` as `[[c, s], [-s, c]]`.
fn rotate(a: &mut Band, p: usize, q: usize, c: Complex64, s: Complex64) {
    let n = a.len();
    let w = a.upper;
    let lo = p.saturating_sub(w);
    let hi = (q + w).min(n - 1);
    for j in lo..=hi {
        let (ap, aq) = (a.get(p, j), a.get(q, j));
        if a.in_band(p, j) {
            a.set(p, j, c * ap + s * aq);
        }
        if a.in_band(q, j) {
            a.set(q, j, -s * ap + c * aq);
        }
    }
    for i in lo..=hi {
        let (ap, aq) = (a.get(i, p), a.get(i, q));
        if a.in_band(i, p) {
            a.set(i, p, c * ap + s * aq);
        }
        if a.in_band(i, q) {
            a.set(i, q, -s * ap + c * aq);
        }
    }
}
