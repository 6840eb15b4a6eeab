//! Eigenvalues of a general dense complex matrix: balancing, Householder
//! reduction to upper Hessenberg form, then single-shift QR with Wilkinson
//! shifts and deflation on negligible subdiagonals. Also a dense LU for
//! inverse iteration on small matrices.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Row-major square matrix.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl Dense {
    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.a[i * self.n + j]
    }
}

/// Diagonal similarity by powers of two that equalizes row and column norms.
fn balance(m: &mut Dense) {
    let n = m.n;
    let radix = 2.0f64;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m.at(j, i).l1_norm();
                    r += m.at(i, j).l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    *m.at_mut(i, j) /= f;
                }
                for j in 0..n {
                    *m.at_mut(j, i) *= f;
                }
            }
        }
    }
}

fn hessenberg(m: &mut Dense) {
    let n = m.n;
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| m.at(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = m.at(k + 1, k);
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = m.at(i, k);
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for x in v.iter_mut().take(n).skip(k + 1) {
            *x /= vnorm;
        }
        // H <- (I - 2 v v^H) H
        for j in 0..n {
            let mut s = ZERO;
            for i in k + 1..n {
                s += v[i].conj() * m.at(i, j);
            }
            s *= 2.0;
            for i in k + 1..n {
                *m.at_mut(i, j) -= v[i] * s;
            }
        }
        // H <- H (I - 2 v v^H)
        for i in 0..n {
            let mut s = ZERO;
            for j in k + 1..n {
                s += m.at(i, j) * v[j];
            }
            s *= 2.0;
            for j in k + 1..n {
                *m.at_mut(i, j) -= s * v[j].conj();
            }
        }
        for i in k + 2..n {
            *m.at_mut(i, k) = ZERO;
        }
    }
}

/// Eigenvalues of `m` (consumed). `Err(index)` if some eigenvalue fails to converge.
pub(crate) fn eigenvalues(mut m: Dense) -> Result<Vec<Complex64>, usize> {
    let n = m.n;
    let mut out = vec![ZERO; n];
    if n == 0 {
        return Ok(out);
    }
    balance(&mut m);
    hessenberg(&mut m);
    let mut hi = n - 1;
    let mut iter = 0;
    let mut rot: Vec<(Complex64, Complex64)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            out[0] = m.at(0, 0);
            break;
        }
        let mut l = 0;
        for k in (1..=hi).rev() {
            let s = m.at(k, k).l1_norm() + m.at(k - 1, k - 1).l1_norm();
            if m.at(k, k - 1).l1_norm() <= f64::EPSILON * s {
                *m.at_mut(k, k - 1) = ZERO;
                l = k;
                break;
            }
        }
        if l == hi {
            out[hi] = m.at(hi, hi);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > ITERATIONS_PER_EIGENVALUE {
            return Err(hi);
        }
        let mu = if iter % 10 == 0 {
            m.at(hi, hi) + Complex64::new(m.at(hi, hi - 1).norm(), 0.0) * 1.5
        } else {
            let a = m.at(hi - 1, hi - 1);
            let b = m.at(hi - 1, hi);
            let c = m.at(hi, hi - 1);
            let d = m.at(hi, hi);
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let (r1, r2) = ((a + d) * 0.5 + disc, (a + d) * 0.5 - disc);
            if (r1 - d).norm() < (r2 - d).norm() { r1 } else { r2 }
        };
        for k in l..=hi {
            *m.at_mut(k, k) -= mu;
        }
        rot.clear();
        for k in l..hi {
            let x = m.at(k, k);
            let y = m.at(k + 1, k);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (Complex64::new(1.0, 0.0), ZERO) } else { (x / r, y / r) };
            for j in k..=hi {
                let (p, q) = (m.at(k, j), m.at(k + 1, j));
                *m.at_mut(k, j) = c.conj() * p + s.conj() * q;
                *m.at_mut(k + 1, j) = -s * p + c * q;
            }
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hi) {
                let (p, q) = (m.at(i, k), m.at(i, k + 1));
                *m.at_mut(i, k) = c * p + s * q;
                *m.at_mut(i, k + 1) = -s.conj() * p + c.conj() * q;
            }
        }
        for k in l..=hi {
            *m.at_mut(k, k) += mu;
        }
    }
    Ok(out)
}

/// Dense LU with partial pivoting; zero pivots become `tiny`.
pub(crate) struct DenseLu {
    n: usize,
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
}

impl DenseLu {
    pub(crate) fn factor(m: &Dense, tiny: f64) -> Self {
        let n = m.n;
        let mut lu = m.a.clone();
        let mut pivots = vec![0; n];
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if lu[i * n + k].norm() > lu[p * n + k].norm() {
                    p = i;
                }
            }
            pivots[k] = p;
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
            }
            if lu[k * n + k].norm() == 0.0 {
                lu[k * n + k] = Complex64::new(tiny, 0.0);
            }
            let piv = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / piv;
                lu[i * n + k] = l;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= l * u;
                }
            }
        }
        Self { n, lu, pivots }
    }

    pub(crate) fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        // rows were swapped in full, multipliers included
        for k in 0..n {
            b.swap(k, self.pivots[k]);
        }
        for k in 0..n {
            let bk = b[k];
            for i in k + 1..n {
                b[i] -= self.lu[i * n + k] * bk;
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..n {
                s -= self.lu[k * n + j] * b[j];
            }
            b[k] = s / self.lu[k * n + k];
        }
    }
}
