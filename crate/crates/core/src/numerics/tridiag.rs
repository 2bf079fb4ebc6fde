//! Lowest eigenvalues of a symmetric tridiagonal matrix by Sturm bisection.

use super::scalar::Real;
use crate::error::{Error, Result};

/// Lowest `k` eigenvalues of the symmetric tridiagonal matrix with diagonal
/// `d` and off-diagonal `e`, ascending. Absolute error is about
/// 1e-12 * (1 + |lambda|) in `f64`, well inside the 1e-10 contract.
pub fn tridiag_lowest_eigs<F: Real>(d: &[F], e: &[F], k: usize) -> Result<Vec<F>> {
    let n = d.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty tridiagonal matrix".into()));
    }
    if e.len() + 1 != n {
        return Err(Error::InvalidInput(format!(
            "off-diagonal length {} does not match size {}",
            e.len(),
            n
        )));
    }
    if k > n {
        return Err(Error::InvalidInput(format!(
            "requested {} eigenvalues of a {}x{} matrix",
            k, n, n
        )));
    }

    // Gershgorin bounds
    let mut lo = F::infinity();
    let mut hi = F::neg_infinity();
    for i in 0..n {
        let left = if i > 0 { e[i - 1].abs() } else { F::zero() };
        let right = if i < n - 1 { e[i].abs() } else { F::zero() };
        lo = lo.min(d[i] - left - right);
        hi = hi.max(d[i] + left + right);
    }
    let scale = lo.abs().max(hi.abs()).max(F::one());
    let pivmin = F::epsilon() * F::epsilon() * scale;

    // number of eigenvalues strictly below x, via the LDL^T sign count
    let count = |x: F| -> usize {
        let mut cnt = 0usize;
        let mut q = d[0] - x;
        for i in 1..n {
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < F::zero() {
                cnt += 1;
            }
            q = d[i] - x - e[i - 1] * e[i - 1] / q;
        }
        if q < F::zero() {
            cnt += 1;
        }
        cnt
    };

    let tol = F::of(1e-13);
    let mut out: Vec<F> = Vec::with_capacity(k);
    for j in 0..k {
        let mut a = if j == 0 {
            lo
        } else {
            out[j - 1] - tol * (F::one() + out[j - 1].abs())
        };
        let mut b = hi;
        // invariant: count(a) <= j < count(b)
        for _ in 0..140 {
            let width = b - a;
            if width <= tol * (F::one() + a.abs().max(b.abs())) {
                break;
            }
            let mid = a + width * F::of(0.5);
            if count(mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(a + (b - a) * F::of(0.5));
    }
    Ok(out)
}
