//! Real roots of a polynomial: balanced companion-matrix eigenvalues
//! followed by Newton polishing.

use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Tolerance for accepting a companion eigenvalue as real.
const IMAG_TOL: f64 = 1e-8;
const NEWTON_STEPS: usize = 8;

#[derive(Debug, Clone)]
pub struct RealRoots {
    /// Degree of the input polynomial.
    pub degree: usize,
    /// Real roots sorted strictly decreasing, multiplicities repeated.
    pub roots: Vec<f64>,
}

/// All real roots of `p`, sorted decreasing.
///
/// Complex companion eigenvalues with |Im| <= 1e-8 (1 + |Re|) are projected
/// onto the real axis and polished; others are dropped. The returned record
/// carries the degree so callers can detect missing real roots.
pub fn real_roots(p: &Polynomial<f64>) -> Result<RealRoots> {
    let coeffs = p.coeffs();
    let degree = match p.degree() {
        None | Some(0) => {
            return Err(Error::InvalidInput(
                "real_roots requires degree >= 1".into(),
            ))
        }
        Some(d) => d,
    };
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite coefficient at degree {k}"
            )));
        }
    }

    // exact zero roots: strip trailing structure from the constant end
    let zeros_at_origin = coeffs.iter().take_while(|c| **c == 0.0).count();
    let reduced: Vec<f64> = coeffs[zeros_at_origin..].to_vec();
    let red_degree = reduced.len() - 1;

    let mut roots: Vec<f64> = vec![0.0; zeros_at_origin];
    if red_degree >= 1 {
        let monic: Vec<f64> = {
            let lead = *reduced.last().unwrap();
            reduced.iter().map(|c| c / lead).collect()
        };
        let n = red_degree;
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            companion[(i, n - 1)] = -monic[i];
        }
        balance(&mut companion);
        let eigs = companion.complex_eigenvalues();
        let poly = Polynomial::new(reduced);
        let dpoly = poly.derivative();
        for ev in eigs.iter() {
            if ev.im.abs() <= IMAG_TOL * (1.0 + ev.re.abs()) {
                roots.push(polish(&poly, &dpoly, ev.re));
            }
        }
    }

    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(RealRoots { degree, roots })
}

/// Parlett-Reinsch balancing with radix-2 scaling (exact in floating point).
fn balance(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let radix = 2.0f64;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c: f64 = 0.0;
            let mut r: f64 = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let s = c + r;
            let (mut c, mut r) = (c, r);
            while c < r / radix {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while c >= r * radix {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if (c + r) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

fn polish(p: &Polynomial<f64>, dp: &Polynomial<f64>, start: f64) -> f64 {
    let mut x = start;
    let mut fx = p.eval(&x).abs();
    for _ in 0..NEWTON_STEPS {
        let d = dp.eval(&x);
        if d == 0.0 {
            break;
        }
        let step = p.eval(&x) / d;
        let candidate = x - step;
        if !candidate.is_finite() {
            break;
        }
        let fc = p.eval(&candidate).abs();
        if fc >= fx {
            break;
        }
        x = candidate;
        fx = fc;
    }
    x
}
