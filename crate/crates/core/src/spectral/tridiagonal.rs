//! Implicit QL iteration for complex symmetric tridiagonal matrices.
//!
//! This is the classical real-symmetric QL algorithm with every square root
//! taken in the complex plane, so the rotations are complex orthogonal
//! (`c^2 + s^2 = 1`). A rotation whose norm `sqrt(f^2 + g^2)` nearly vanishes
//! while `f, g` do not is reported as a breakdown.

use num_complex::Complex64;

pub(crate) const MAX_ITERATIONS: usize = 60;

#[derive(Debug)]
pub(crate) enum QlFailure {
    Breakdown,
    NoConvergence,
}

/// Eigenvalues of the tridiagonal matrix with diagonal `d` and off-diagonal
/// `e` (`e[i]` couples `i` and `i + 1`, last entry ignored). Unsorted.
pub(crate) fn eigenvalues(mut d: Vec<Complex64>, mut e: Vec<Complex64>) -> Result<Vec<Complex64>, QlFailure> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    e[n - 1] = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITERATIONS {
                return Err(QlFailure::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (e[l] * 2.0);
            let mut r = (g * g + one).sqrt();
            let denom = if (g + r).norm() >= (g - r).norm() { g + r } else { g - r };
            g = d[m] - d[l] + e[l] / denom;
            if iter % 20 == 0 {
                // exceptional shift
                g += e[l] * Complex64::new(0.75, 0.5);
            }
            let mut s = one;
            let mut c = one;
            let mut p = Complex64::new(0.0, 0.0);
            let mut restart = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r.norm() <= f64::EPSILON * (f.norm() + g.norm()) {
                    if f.norm() + g.norm() == 0.0 {
                        d[i + 1] -= p;
                        e[m] = Complex64::new(0.0, 0.0);
                        restart = true;
                        break;
                    }
                    return Err(QlFailure::Breakdown);
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + c * b * 2.0;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if restart {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(d)
}
