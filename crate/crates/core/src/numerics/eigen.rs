//! Dense symmetric eigensolver: cyclic Jacobi with accumulated rotations.
//!
//! Small matrices only (the basis sizes here stay below ~100); Jacobi is
//! simple, backward stable, and keeps the eigenvector matrix orthonormal
//! to machine precision.

use super::mat::DenseMat;
use super::scalar::Real;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SymEig<F> {
    /// Eigenvalues, ascending.
    pub values: Vec<F>,
    /// Orthonormal eigenvectors as matrix columns, ordered like `values`.
    pub vectors: DenseMat<F>,
}

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a symmetric matrix.
///
/// The input must be symmetric to within 1e-12 of its norm; the backward
/// error of the decomposition is of the same order.
pub fn sym_eig<F: Real>(a: &DenseMat<F>) -> Result<SymEig<F>> {
    if !a.is_square() {
        return Err(Error::InvalidInput("sym_eig requires a square matrix".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SymEig {
            values: Vec::new(),
            vectors: DenseMat::zeros(0, 0),
        });
    }
    let scale = a.max_abs();
    if a.max_asymmetry() > F::of(1e-12) * scale.max(F::one()) {
        return Err(Error::InvalidInput(format!(
            "matrix asymmetry {:?} exceeds 1e-12 * norm",
            a.max_asymmetry()
        )));
    }

    let mut m = a.clone();
    m.symmetrize();
    let mut v: DenseMat<F> = DenseMat::identity(n);
    let fro = m.frobenius_norm().max(F::min_positive_value());
    let target = F::epsilon() * fro;

    for _sweep in 0..MAX_SWEEPS {
        let mut off = F::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DenseMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymEig { values, vectors })
}

fn rotate<F: Real>(m: &mut DenseMat<F>, v: &mut DenseMat<F>, p: usize, q: usize) {
    let n = m.rows();
    let apq = m[(p, q)];
    let small = F::epsilon() * (m[(p, p)].abs() + m[(q, q)].abs() + F::min_positive_value());
    if apq.abs() <= small {
        m[(p, q)] = F::zero();
        m[(q, p)] = F::zero();
        return;
    }
    let theta = (m[(q, q)] - m[(p, p)]) / (F::of(2.0) * apq);
    let t = {
        let denom = theta.abs() + (F::one() + theta * theta).sqrt();
        let t = F::one() / denom;
        if theta < F::zero() {
            -t
        } else {
            t
        }
    };
    let c = F::one() / (F::one() + t * t).sqrt();
    let s = t * c;
    let tau = s / (F::one() + c);

    let app = m[(p, p)];
    let aqq = m[(q, q)];
    m[(p, p)] = app - t * apq;
    m[(q, q)] = aqq + t * apq;
    m[(p, q)] = F::zero();
    m[(q, p)] = F::zero();
    for r in 0..n {
        if r != p && r != q {
            let arp = m[(r, p)];
            let arq = m[(r, q)];
            let new_rp = arp - s * (arq + tau * arp);
            let new_rq = arq + s * (arp - tau * arq);
            m[(r, p)] = new_rp;
            m[(p, r)] = new_rp;
            m[(r, q)] = new_rq;
            m[(q, r)] = new_rq;
        }
    }
    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp - s * (vrq + tau * vrp);
        v[(r, q)] = vrq + s * (vrp - tau * vrq);
    }
}
