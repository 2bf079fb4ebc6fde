//! Ritz variational solver for the full bound-state spectrum at arbitrary
//! Coulomb coefficient.
//!
//! Two bases span the same space { xi^(gamma+j) exp(-xi^2/2), j < N }:
//!
//! * `RawMonomial`: the functions as written. Every matrix element is a
//!   Gamma moment m(p) = Gamma((p+2)/2)/2. The Gram matrix is severely
//!   ill-conditioned, so this kind is capped at N = 25.
//! * `OrthonormalOscillator`: oscillator eigenfunctions of the free
//!   (beta = 0) problem for exponents gamma and gamma+1, interleaved so the
//!   first N functions span exactly the first N monomials. Each parity
//!   sector is exactly orthonormal and the free Hamiltonian is diagonal on
//!   the even sector; matrix elements are closed Laguerre-Gamma forms.
//!
//! The two spans degenerate numerically as N grows (the parity sectors
//! approach each other), so the generalized problem is reduced by canonical
//! orthogonalization: eigendecompose the overlap, drop directions below a
//! spectral cutoff, and solve the projected symmetric problem. The retained
//! subspace depends only on (gamma, kind, N), never on beta, which keeps the
//! Hellmann-Feynman identity exact at the projected level.

use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, sym_eig, DenseMat};
use serde::{Deserialize, Serialize};

pub type Mat = DenseMat<f64>;

/// Default basis used by the high-level commands.
pub const DEFAULT_BASIS_SIZE: usize = 40;
/// Size step between the main solve and the convergence probe.
pub const CONVERGENCE_PROBE_STEP: usize = 5;
/// Documented breakdown limit of the raw monomial kind.
pub const RAW_SIZE_LIMIT: usize = 25;
/// Overlap spectral cutoff for canonical orthogonalization.
const OVERLAP_CUTOFF: f64 = 1e-14;
/// Hard sanity cap for any basis size.
const SIZE_LIMIT: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisKind {
    #[serde(rename = "raw-monomial")]
    RawMonomial,
    #[serde(rename = "orthonormal-oscillator")]
    OrthonormalOscillator,
}

impl std::fmt::Display for BasisKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisKind::RawMonomial => write!(f, "raw-monomial"),
            BasisKind::OrthonormalOscillator => write!(f, "orthonormal-oscillator"),
        }
    }
}

impl std::str::FromStr for BasisKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw-monomial" | "raw" | "monomial" => Ok(BasisKind::RawMonomial),
            "orthonormal-oscillator" | "oscillator" | "orthonormal" => {
                Ok(BasisKind::OrthonormalOscillator)
            }
            _ => Err(format!(
                "unknown basis kind `{s}` (expected raw-monomial or orthonormal-oscillator)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BasisSpec {
    pub gamma: f64,
    pub size: usize,
    pub kind: BasisKind,
}

impl BasisSpec {
    pub fn new(gamma: f64, size: usize, kind: BasisKind) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                message: format!("must be finite and >= 0, got {gamma}"),
            });
        }
        if size == 0 {
            return Err(Error::InvalidParameter {
                name: "basis_size",
                message: "must be at least 1".into(),
            });
        }
        if kind == BasisKind::RawMonomial && size > RAW_SIZE_LIMIT {
            return Err(Error::BasisTooLarge {
                message: format!(
                    "raw monomial basis is limited to N = {RAW_SIZE_LIMIT} \
                     (the Gram matrix is numerically singular beyond that); \
                     use a smaller size or the orthonormal-oscillator kind"
                ),
            });
        }
        if size > SIZE_LIMIT {
            return Err(Error::BasisTooLarge {
                message: format!("basis size {size} exceeds the supported maximum {SIZE_LIMIT}"),
            });
        }
        Ok(BasisSpec { gamma, size, kind })
    }

    /// Default oscillator basis at the given exponent.
    pub fn default_for(gamma: f64) -> Result<Self> {
        BasisSpec::new(gamma, DEFAULT_BASIS_SIZE, BasisKind::OrthonormalOscillator)
    }

    fn with_size(&self, size: usize) -> Result<Self> {
        BasisSpec::new(self.gamma, size, self.kind)
    }
}

/// Overlap, free Hamiltonian (beta = 0), and 1/xi matrices of a basis.
#[derive(Debug, Clone)]
pub struct BasisMatrices {
    pub overlap: Mat,
    pub h_free: Mat,
    pub inv_xi: Mat,
}

/// Moment of the Gaussian weight: integral xi^p e^{-xi^2} xi dxi
/// = Gamma((p+2)/2) / 2.
fn moment(p: f64) -> Result<f64> {
    Ok(0.5 * gamma_fn((p + 2.0) / 2.0)?)
}

/// Gram matrix of the basis. For the raw kind,
/// S_ij = Gamma(gamma + (i+j)/2 + 1) / 2.
pub fn gram_matrix(basis: &BasisSpec) -> Result<Mat> {
    Ok(basis_matrices(basis)?.overlap)
}

/// Hamiltonian matrix in the symmetric (integrated-by-parts) form,
/// H_ij = integral [u_i' u_j' + (gamma^2/xi^2 + beta/xi + xi^2) u_i u_j] xi dxi.
pub fn hamiltonian_matrix(basis: &BasisSpec, beta: f64) -> Result<Mat> {
    if !beta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "beta",
            message: format!("must be finite, got {beta}"),
        });
    }
    let mats = basis_matrices(basis)?;
    let n = basis.size;
    let mut h = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = mats.h_free[(i, j)] + beta * mats.inv_xi[(i, j)];
            if !v.is_finite() {
                return Err(Error::MatrixElement(format!(
                    "H[{i},{j}] is not finite"
                )));
            }
            h[(i, j)] = v;
        }
    }
    Ok(h)
}

/// Matrix of 1/xi in the given basis (the beta-derivative of H).
pub fn inverse_xi_matrix(basis: &BasisSpec) -> Result<Mat> {
    Ok(basis_matrices(basis)?.inv_xi)
}

pub fn basis_matrices(basis: &BasisSpec) -> Result<BasisMatrices> {
    let mats = match basis.kind {
        BasisKind::RawMonomial => raw_matrices(basis.gamma, basis.size)?,
        BasisKind::OrthonormalOscillator => ladder_matrices(basis.gamma, basis.size)?,
    };
    for m in [&mats.overlap, &mats.h_free, &mats.inv_xi] {
        if !m.max_abs().is_finite() {
            return Err(Error::MatrixElement("non-finite basis matrix entry".into()));
        }
    }
    Ok(mats)
}

fn raw_matrices(gamma: f64, n: usize) -> Result<BasisMatrices> {
    let mut overlap = Mat::zeros(n, n);
    let mut h_free = Mat::zeros(n, n);
    let mut inv_xi = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let a = gamma + i as f64;
            let b = gamma + j as f64;
            let s = moment(a + b)?;
            let m1 = moment(a + b - 1.0)?;
            // kinetic + centrifugal + oscillator; the (ab + gamma^2) factor
            // vanishes exactly when the singular moment would diverge
            let mut h = -(a + b) * moment(a + b)? + 2.0 * moment(a + b + 2.0)?;
            let coef = a * b + gamma * gamma;
            if coef != 0.0 {
                h += coef * moment(a + b - 2.0)?;
            }
            overlap[(i, j)] = s;
            overlap[(j, i)] = s;
            h_free[(i, j)] = h;
            h_free[(j, i)] = h;
            inv_xi[(i, j)] = m1;
            inv_xi[(j, i)] = m1;
        }
    }
    Ok(BasisMatrices {
        overlap,
        h_free,
        inv_xi,
    })
}

/// Oscillator-ladder matrices. Slot 2k holds the even function
/// e_k = N_k xi^gamma L_k^(gamma)(xi^2) exp(-xi^2/2) and slot 2l+1 the odd
/// function o_l = N'_l xi^(gamma+1) L_l^(gamma+1)(xi^2) exp(-xi^2/2).
fn ladder_matrices(gamma: f64, n: usize) -> Result<BasisMatrices> {
    let n_even = n.div_ceil(2);
    let n_odd = n / 2;
    let gamma_one = gamma_fn(gamma + 1.0)?;
    let gamma_two = gamma_fn(gamma + 2.0)?;

    // ratio_e[k] = k! Gamma(gamma+1) / Gamma(k+gamma+1), stable product form
    let mut ratio_e = Vec::with_capacity(n_even.max(1));
    ratio_e.push(1.0);
    for k in 1..n_even {
        ratio_e.push(ratio_e[k - 1] * k as f64 / (gamma + k as f64));
    }
    let mut ratio_o = Vec::with_capacity(n_odd.max(1));
    ratio_o.push(1.0);
    for l in 1..n_odd {
        ratio_o.push(ratio_o[l - 1] * l as f64 / (gamma + 1.0 + l as f64));
    }
    let norm_e: Vec<f64> = ratio_e.iter().map(|r| (2.0 * r / gamma_one).sqrt()).collect();
    let norm_o: Vec<f64> = ratio_o.iter().map(|r| (2.0 * r / gamma_two).sqrt()).collect();

    let mut overlap = Mat::identity(n);
    let mut h_free = Mat::zeros(n, n);
    let mut inv_xi = Mat::zeros(n, n);

    for k in 0..n_even {
        h_free[(2 * k, 2 * k)] = 2.0 * (2.0 * k as f64 + gamma + 1.0);
        for kp in k..n_even {
            let v = 0.5
                * norm_e[k]
                * norm_e[kp]
                * laguerre_pair_integral(gamma - 0.5, gamma, k, kp)?;
            inv_xi[(2 * k, 2 * kp)] = v;
            inv_xi[(2 * kp, 2 * k)] = v;
        }
    }
    for l in 0..n_odd {
        for lp in l..n_odd {
            // free Hamiltonian on the odd sector: the gamma+1 oscillator
            // shifted by the centrifugal difference -(2 gamma + 1)/xi^2
            let correction = -(2.0 * gamma + 1.0)
                * 0.5
                * norm_o[l]
                * norm_o[lp]
                * laguerre_pair_integral(gamma, gamma + 1.0, l, lp)?;
            let diag = if l == lp {
                2.0 * (2.0 * l as f64 + gamma + 2.0)
            } else {
                0.0
            };
            h_free[(2 * l + 1, 2 * lp + 1)] = diag + correction;
            h_free[(2 * lp + 1, 2 * l + 1)] = diag + correction;

            let v = 0.5
                * norm_o[l]
                * norm_o[lp]
                * laguerre_pair_integral(gamma + 0.5, gamma + 1.0, l, lp)?;
            inv_xi[(2 * l + 1, 2 * lp + 1)] = v;
            inv_xi[(2 * lp + 1, 2 * l + 1)] = v;
        }
    }
    for k in 0..n_even {
        for l in 0..n_odd {
            let s = 0.5
                * norm_e[k]
                * norm_o[l]
                * laguerre_mixed_integral(gamma + 0.5, gamma, k, l)?;
            overlap[(2 * k, 2 * l + 1)] = s;
            overlap[(2 * l + 1, 2 * k)] = s;
            // e_k is a free eigenfunction, so the cross block follows the overlap
            let h = 2.0 * (2.0 * k as f64 + gamma + 1.0) * s;
            h_free[(2 * k, 2 * l + 1)] = h;
            h_free[(2 * l + 1, 2 * k)] = h;
            // <e_k| 1/xi |o_l> collapses to the diagonal Laguerre norm
            let m = if k <= l {
                0.5 * norm_e[k] * norm_o[l] * gamma_one / ratio_e[k]
            } else {
                0.0
            };
            inv_xi[(2 * k, 2 * l + 1)] = m;
            inv_xi[(2 * l + 1, 2 * k)] = m;
        }
    }
    Ok(BasisMatrices {
        overlap,
        h_free,
        inv_xi,
    })
}

/// integral t^s e^{-t} L_m^(alpha)(t) L_n^(alpha)(t) dt as a finite sum of
/// Gamma-binomial terms. For the exponent offsets used here (s - alpha in
/// {-1, -1/2, +1/2}) every term carries the same sign, so the sum is stable.
fn laguerre_pair_integral(s: f64, alpha: f64, m: usize, n: usize) -> Result<f64> {
    let x = s - alpha;
    let lo = m.min(n);
    let mut c_m = binom_real(x, m);
    let mut c_n = binom_real(x, n);
    let mut c_sk = 1.0; // C(s+p, p) at p = 0
    let mut total = 0.0;
    for p in 0..=lo {
        if p > 0 {
            c_sk *= (s + p as f64) / p as f64;
            // step the falling binomials down: C(x, q-1) = C(x, q) q/(x-q+1)
            let qm = (m - p + 1) as f64;
            c_m *= qm / (x - qm + 1.0);
            let qn = (n - p + 1) as f64;
            c_n *= qn / (x - qn + 1.0);
        }
        total += c_m * c_n * c_sk;
    }
    let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * gamma_fn(s + 1.0)? * total)
}

/// integral t^s e^{-t} L_m^(gamma)(t) L_n^(gamma+1)(t) dt via
/// L_n^(gamma+1) = sum_{j<=n} L_j^(gamma).
fn laguerre_mixed_integral(s: f64, gamma: f64, m: usize, n: usize) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..=n {
        total += laguerre_pair_integral(s, gamma, m, j)?;
    }
    Ok(total)
}

fn binom_real(x: f64, p: usize) -> f64 {
    let mut out = 1.0;
    for i in 0..p {
        out *= (x - i as f64) / (i as f64 + 1.0);
    }
    out
}

/// Spectrum of the reduced problem at one (gamma, beta).
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub gamma: f64,
    pub beta: f64,
    pub basis_kind: BasisKind,
    pub basis_size: usize,
    /// Lowest eigenvalues, ascending; Ritz upper bounds to the exact ones.
    pub eigenvalues: Vec<f64>,
    /// Basis coefficients per state, normalized to c^T S c = 1.
    pub eigenvector_coeffs: Vec<Vec<f64>>,
    /// |W_j(N) - W_j(N - probe)| per state; None when the probe basis would
    /// be smaller than the requested state count.
    pub convergence_estimate: Option<Vec<f64>>,
    /// Independent directions kept by the overlap cutoff.
    pub retained_rank: usize,
}

/// Solve the reduced eigenproblem for the lowest `num_states` eigenvalues.
pub fn solve_spectrum(basis: &BasisSpec, beta: f64, num_states: usize) -> Result<SpectrumResult> {
    if num_states == 0 {
        return Err(Error::InvalidParameter {
            name: "num_states",
            message: "must be at least 1".into(),
        });
    }
    if num_states > basis.size {
        return Err(Error::InvalidParameter {
            name: "num_states",
            message: format!("{num_states} states need a basis of at least that size, got {}", basis.size),
        });
    }
    let (eigenvalues, eigenvector_coeffs, retained_rank) = solve_once(basis, beta, num_states)?;

    let probe_size = basis.size.saturating_sub(CONVERGENCE_PROBE_STEP);
    let convergence_estimate = if probe_size >= num_states && probe_size >= 2 {
        let probe = basis.with_size(probe_size)?;
        let (probe_vals, _, _) = solve_once(&probe, beta, num_states)?;
        Some(
            eigenvalues
                .iter()
                .zip(&probe_vals)
                .map(|(a, b)| (a - b).abs())
                .collect(),
        )
    } else {
        None
    };

    Ok(SpectrumResult {
        gamma: basis.gamma,
        beta,
        basis_kind: basis.kind,
        basis_size: basis.size,
        eigenvalues,
        eigenvector_coeffs,
        convergence_estimate,
        retained_rank,
    })
}

fn solve_once(
    basis: &BasisSpec,
    beta: f64,
    num_states: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, usize)> {
    let mats = basis_matrices(basis)?;
    let n = basis.size;
    let mut h = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = mats.h_free[(i, j)] + beta * mats.inv_xi[(i, j)];
        }
    }
    if !h.max_abs().is_finite() {
        return Err(Error::MatrixElement("non-finite Hamiltonian entry".into()));
    }

    // unit-diagonal scaling, exact up to one rounding per entry
    let scale: Vec<f64> = (0..n).map(|i| 1.0 / mats.overlap[(i, i)].sqrt()).collect();
    let s_norm = Mat::from_fn(n, n, |i, j| mats.overlap[(i, j)] * scale[i] * scale[j]);
    let h_norm = Mat::from_fn(n, n, |i, j| h[(i, j)] * scale[i] * scale[j]);

    // canonical orthogonalization with spectral cutoff
    let overlap_eig = sym_eig(&s_norm)?;
    let lam_max = *overlap_eig
        .values
        .last()
        .ok_or_else(|| Error::Numerical("empty overlap spectrum".into()))?;
    let keep: Vec<usize> = (0..n)
        .filter(|&i| overlap_eig.values[i] > OVERLAP_CUTOFF * lam_max)
        .collect();
    let rank = keep.len();
    if rank < num_states {
        return Err(Error::BasisTooLarge {
            message: format!(
                "only {rank} numerically independent directions in a size-{n} basis; \
                 request fewer states or use the orthonormal-oscillator kind"
            ),
        });
    }
    let x = Mat::from_fn(n, rank, |i, c| {
        overlap_eig.vectors[(i, keep[c])] / overlap_eig.values[keep[c]].sqrt()
    });
    let mut projected = x.transpose().matmul(&h_norm).matmul(&x);
    projected.symmetrize();
    let eig = sym_eig(&projected)?;

    let eigenvalues: Vec<f64> = eig.values[..num_states].to_vec();
    let mut coeffs = Vec::with_capacity(num_states);
    for j in 0..num_states {
        let y = eig.vectors.column(j);
        let in_scaled = x.matvec(&y);
        coeffs.push((0..n).map(|i| in_scaled[i] * scale[i]).collect());
    }
    Ok((eigenvalues, coeffs, rank))
}

/// Expectation value of 1/xi in a state given by basis coefficients.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InvXiExpectation {
    pub value: f64,
    /// Set when the input state was not normalized and the routine
    /// renormalized it internally.
    pub renormalized: bool,
}

pub fn expectation_inverse_xi(state: &[f64], basis: &BasisSpec) -> Result<InvXiExpectation> {
    if state.len() != basis.size {
        return Err(Error::InvalidInput(format!(
            "state length {} does not match basis size {}",
            state.len(),
            basis.size
        )));
    }
    let mats = basis_matrices(basis)?;
    let s_c = mats.overlap.matvec(state);
    let norm: f64 = state.iter().zip(&s_c).map(|(a, b)| a * b).sum();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput(
            "state has non-positive norm with respect to the Gram matrix".into(),
        ));
    }
    let m_c = mats.inv_xi.matvec(state);
    let raw: f64 = state.iter().zip(&m_c).map(|(a, b)| a * b).sum();
    Ok(InvXiExpectation {
        value: raw / norm,
        renormalized: (norm - 1.0).abs() > 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn gram_matrix_closed_forms() {
        let b = BasisSpec::new(0.0, 2, BasisKind::RawMonomial).unwrap();
        let s = gram_matrix(&b).unwrap();
        assert_abs_diff_eq!(s[(0, 0)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s[(0, 1)], SQRT_PI / 4.0, epsilon = 1e-14);

        let b = BasisSpec::new(1.0, 1, BasisKind::RawMonomial).unwrap();
        let s = gram_matrix(&b).unwrap();
        assert_abs_diff_eq!(s[(0, 0)], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn rayleigh_quotients_single_function() {
        // u_0 is the exact free ground state: H00/S00 = 2 (gamma + 1)
        for (gamma, want) in [(0.0, 2.0), (1.0, 4.0)] {
            let b = BasisSpec::new(gamma, 1, BasisKind::RawMonomial).unwrap();
            let h = hamiltonian_matrix(&b, 0.0).unwrap();
            let s = gram_matrix(&b).unwrap();
            assert_abs_diff_eq!(h[(0, 0)] / s[(0, 0)], want, epsilon = 1e-13);
        }
        // Coulomb shift: 2 + sqrt(pi) at gamma = 0, beta = 1
        let b = BasisSpec::new(0.0, 1, BasisKind::RawMonomial).unwrap();
        let h = hamiltonian_matrix(&b, 1.0).unwrap();
        let s = gram_matrix(&b).unwrap();
        assert_abs_diff_eq!(h[(0, 0)] / s[(0, 0)], 2.0 + SQRT_PI, epsilon = 1e-13);
    }

    #[test]
    fn raw_kind_is_capped() {
        assert!(BasisSpec::new(0.0, 26, BasisKind::RawMonomial).is_err());
        assert!(BasisSpec::new(0.0, 25, BasisKind::RawMonomial).is_ok());
        assert!(BasisSpec::new(0.0, 40, BasisKind::OrthonormalOscillator).is_ok());
    }

    #[test]
    fn free_spectrum_is_exact_oscillator() {
        for gamma in [0.0, 1.0, 2.0] {
            let basis = BasisSpec::default_for(gamma).unwrap();
            let res = solve_spectrum(&basis, 0.0, 4).unwrap();
            for (j, w) in res.eigenvalues.iter().enumerate() {
                let want = 2.0 * (2.0 * j as f64 + gamma + 1.0);
                assert_abs_diff_eq!(w, &want, epsilon = 1e-8);
            }
            let conv = res.convergence_estimate.unwrap();
            assert!(conv.iter().all(|c| *c < 1e-8));
        }
    }

    #[test]
    fn golden_spectrum_beta_sqrt2() {
        let basis = BasisSpec::default_for(0.0).unwrap();
        let res = solve_spectrum(&basis, std::f64::consts::SQRT_2, 4).unwrap();
        let want = [4.0, 7.693978891, 11.50604238, 15.37592718];
        for (got, want) in res.eigenvalues.iter().zip(want) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-8);
        }
        for w in res.eigenvalues.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn ground_state_inverse_xi_free_case() {
        // exact <1/xi> of the free ground state is Gamma(gamma+1/2)/Gamma(gamma+1)
        let basis = BasisSpec::default_for(0.0).unwrap();
        let res = solve_spectrum(&basis, 0.0, 1).unwrap();
        let e = expectation_inverse_xi(&res.eigenvector_coeffs[0], &basis).unwrap();
        assert_abs_diff_eq!(e.value, SQRT_PI, epsilon = 1e-9);
        assert!(!e.renormalized);
        assert!(e.value > 0.0);
    }

    #[test]
    fn renormalization_is_flagged() {
        let basis = BasisSpec::default_for(0.0).unwrap();
        let res = solve_spectrum(&basis, 0.0, 1).unwrap();
        let mut state = res.eigenvector_coeffs[0].clone();
        for c in &mut state {
            *c *= 3.0;
        }
        let e = expectation_inverse_xi(&state, &basis).unwrap();
        assert!(e.renormalized);
        assert_abs_diff_eq!(e.value, SQRT_PI, epsilon = 1e-9);
    }

    #[test]
    fn state_count_validation() {
        let basis = BasisSpec::new(0.0, 4, BasisKind::OrthonormalOscillator).unwrap();
        assert!(solve_spectrum(&basis, 0.0, 5).is_err());
        assert!(solve_spectrum(&basis, 0.0, 0).is_err());
    }
}
