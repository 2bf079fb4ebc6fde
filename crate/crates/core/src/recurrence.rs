//! Three-term recurrence for the series factor of the radial eigenfunction,
//! truncation polynomials in the Coulomb coefficient, their real roots, and
//! the resulting polynomial eigenfunctions.
//!
//! With the ansatz G(xi) = xi^gamma exp(-xi^2/2) sum_j a_j xi^j the radial
//! equation fixes
//!
//!   a_{j+2} = [beta a_{j+1} + (2j - kappa) a_j] / [(j+2)(2 gamma + j + 2)],
//!   a_{-1} = 0, a_0 = 1, kappa = W - 2 gamma - 2.
//!
//! Demanding a_{n+1} = a_{n+2} = 0 forces kappa = 2n and makes a_{n+1},
//! viewed as a polynomial in beta of degree n+1, vanish. Every real root
//! beta^(n,i) of that polynomial defines a distinct potential sharing the
//! single eigenvalue W = 2(n + gamma + 1).

use crate::error::{Error, Result};
use crate::numerics::{real_roots, Polynomial, Scalar};
use num_rational::BigRational;
use serde::Serialize;

/// Coefficients a_0..a_J of the series factor at fixed (gamma, beta, kappa).
#[derive(Debug, Clone)]
pub struct RecurrenceState {
    pub gamma: f64,
    pub beta: f64,
    pub kappa: f64,
    /// a_j for j = 0..=J, with a_0 = 1.
    pub coeffs: Vec<f64>,
}

/// Advance the recurrence, producing a_0..a_J.
pub fn advance_recurrence(gamma: f64, beta: f64, kappa: f64, j_max: usize) -> Result<RecurrenceState> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            message: format!("must be finite and >= 0, got {gamma}"),
        });
    }
    if j_max < 1 {
        return Err(Error::InvalidInput("j_max must be at least 1".into()));
    }
    let mut coeffs = Vec::with_capacity(j_max + 1);
    coeffs.push(1.0);
    coeffs.push(beta / (2.0 * gamma + 1.0));
    for j in 0..j_max.saturating_sub(1) {
        let jf = j as f64;
        let denom = (jf + 2.0) * (2.0 * gamma + jf + 2.0);
        let next = (beta * coeffs[j + 1] + (2.0 * jf - kappa) * coeffs[j]) / denom;
        coeffs.push(next);
    }
    Ok(RecurrenceState {
        gamma,
        beta,
        kappa,
        coeffs,
    })
}

/// The truncation polynomial a_{n+1}(beta) at kappa = 2n.
#[derive(Debug, Clone)]
pub struct TruncationPolynomialInBeta {
    pub n: u32,
    pub gamma: f64,
    /// Coefficients ascending in beta; degree is exactly n+1.
    pub coeffs_in_beta: Vec<f64>,
}

/// Run the recurrence over polynomial-valued coefficients and return
/// a_{n+1} as a polynomial in beta. Generic so the production path can use
/// exact rationals while floating point remains available.
pub fn truncation_polynomial_in<T: Scalar>(n: u32, gamma: T) -> Polynomial<T> {
    let kappa = T::from_int_ratio(2 * i64::from(n), 1);
    let two = T::from_int_ratio(2, 1);
    let mut prev = Polynomial::constant(T::one()); // a_0
    // a_1 = beta / (2 gamma + 1)
    let mut cur = prev
        .shift_up()
        .scale(&(T::one() / (two.clone() * gamma.clone() + T::one())));
    for j in 0..i64::from(n) {
        let denom = T::from_int_ratio(j + 2, 1)
            * (two.clone() * gamma.clone() + T::from_int_ratio(j + 2, 1));
        let drive = T::from_int_ratio(2 * j, 1) - kappa.clone();
        let next = cur
            .shift_up()
            .add(&prev.scale(&drive))
            .scale(&(T::one() / denom));
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact construction of the truncation polynomial.
///
/// Every finite `gamma` is an exact binary rational, so the recurrence runs
/// in `BigRational` arithmetic throughout and the only rounding is the final
/// conversion of each coefficient to `f64`.
pub fn truncation_polynomial(n: u32, gamma: f64) -> Result<TruncationPolynomialInBeta> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            message: format!("must be finite and >= 0, got {gamma}"),
        });
    }
    let gamma_exact = BigRational::from_float(gamma)
        .ok_or_else(|| Error::InvalidInput("gamma is not finite".into()))?;
    let exact = truncation_polynomial_in::<BigRational>(n, gamma_exact);
    let coeffs_in_beta = exact.map_to_f64().coeffs().to_vec();
    debug_assert_eq!(coeffs_in_beta.len(), n as usize + 2);
    Ok(TruncationPolynomialInBeta {
        n,
        gamma,
        coeffs_in_beta,
    })
}

/// One root of the truncation condition together with its eigenfunction data.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationSolution {
    pub n: u32,
    /// 1-based root index; roots are sorted strictly decreasing in beta.
    pub i: u32,
    pub gamma: f64,
    pub beta_root: f64,
    #[serde(rename = "W_exact")]
    pub w_exact: f64,
    pub node_count: u32,
    /// a_0..a_n of the polynomial factor of the eigenfunction.
    pub poly_coeffs: Vec<f64>,
}

/// All n+1 truncation solutions for the given (n, gamma), sorted by
/// decreasing root.
pub fn truncation_roots(n: u32, gamma: f64) -> Result<Vec<TruncationSolution>> {
    let tp = truncation_polynomial(n, gamma)?;
    let poly = Polynomial::new(tp.coeffs_in_beta.clone());
    let found = real_roots(&poly)?;
    if found.roots.len() != n as usize + 1 {
        return Err(Error::InternalConsistency(format!(
            "truncation polynomial of degree {} produced {} real roots; all {} roots must be real",
            n + 1,
            found.roots.len(),
            n + 1
        )));
    }
    let kappa = 2.0 * f64::from(n);
    let w_exact = 2.0 * (f64::from(n) + gamma + 1.0);
    let mut out = Vec::with_capacity(found.roots.len());
    for (idx, &beta_root) in found.roots.iter().enumerate() {
        let state = advance_recurrence(gamma, beta_root, kappa, n as usize + 2)?;
        let scale = state
            .coeffs
            .iter()
            .take(n as usize + 1)
            .fold(0.0f64, |m, c| m.max(c.abs()));
        let residual = state.coeffs[n as usize + 1].abs().max(state.coeffs[n as usize + 2].abs());
        if residual > 1e-6 * scale {
            return Err(Error::InternalConsistency(format!(
                "recurrence residual {residual:.3e} at root {beta_root} exceeds sanity bound"
            )));
        }
        let poly_coeffs: Vec<f64> = state.coeffs[..=n as usize].to_vec();
        let node_count = count_nodes(&poly_coeffs)?;
        out.push(TruncationSolution {
            n,
            i: idx as u32 + 1,
            gamma,
            beta_root,
            w_exact,
            node_count,
            poly_coeffs,
        });
    }
    Ok(out)
}

/// Number of sign changes of the polynomial on (0, inf), i.e. positive real
/// roots of odd multiplicity.
pub fn count_nodes(poly_coeffs: &[f64]) -> Result<u32> {
    let p = Polynomial::new(poly_coeffs.to_vec());
    if p.is_zero() {
        return Err(Error::InvalidInput(
            "count_nodes requires a nonzero polynomial".into(),
        ));
    }
    if p.degree() == Some(0) {
        return Ok(0);
    }
    let coarse = grid_sign_changes(&p, 4096);
    match sturm_positive_root_count(&p) {
        Some(sturm) if sturm == coarse => Ok(coarse),
        // tangency or a grid miss: rescan finer and take that count
        _ => Ok(grid_sign_changes(&p, 65536)),
    }
}

/// Sign changes over a geometric grid on (0, R] with R a Cauchy root bound.
fn grid_sign_changes(p: &Polynomial<f64>, points: usize) -> u32 {
    let coeffs = p.coeffs();
    let lead = *p.leading().unwrap();
    let bound = 1.0
        + coeffs[..coeffs.len() - 1]
            .iter()
            .fold(0.0f64, |m, c| m.max((c / lead).abs()));
    // multiply roots of the factored-out origin behaviour into the start sign
    let first_nonzero = coeffs.iter().find(|c| **c != 0.0).unwrap();
    let mut last_sign = first_nonzero.signum();
    let mut changes = 0u32;
    let lo = bound * 1e-9;
    let ratio = (bound / lo).powf(1.0 / points as f64);
    let mut x = lo;
    for _ in 0..=points {
        let v = p.eval(&x);
        if v != 0.0 {
            let s = v.signum();
            if s != last_sign {
                changes += 1;
                last_sign = s;
            }
        }
        x *= ratio;
    }
    changes
}

/// Distinct positive real roots by a Sturm chain; None when the floating
/// chain degenerates.
fn sturm_positive_root_count(p: &Polynomial<f64>) -> Option<u32> {
    let mut chain: Vec<Polynomial<f64>> = vec![normalized(p), normalized(&p.derivative())];
    while chain.last().map(|q| q.degree()) > Some(Some(0)) {
        let k = chain.len();
        let rem = poly_rem(&chain[k - 2], &chain[k - 1])?;
        if rem.is_zero() {
            // repeated roots: chain ends at the gcd; counting still works
            break;
        }
        chain.push(normalized(&rem.scale(&-1.0)));
    }
    let lead = *p.leading().unwrap();
    let bound = 1.0
        + p.coeffs()[..p.coeffs().len() - 1]
            .iter()
            .fold(0.0f64, |m, c| m.max((c / lead).abs()));
    let at_zero = sign_variations(&chain, 1e-12 * bound);
    let at_bound = sign_variations(&chain, bound * (1.0 + 1e-9));
    Some(at_zero.saturating_sub(at_bound) as u32)
}

fn normalized(p: &Polynomial<f64>) -> Polynomial<f64> {
    let m = p.coeffs().iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    if m == 0.0 {
        Polynomial::zero()
    } else {
        p.scale(&(1.0 / m))
    }
}

fn sign_variations(chain: &[Polynomial<f64>], x: f64) -> usize {
    let mut vars = 0;
    let mut last = 0.0f64;
    for q in chain {
        let v = q.eval(&x);
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            vars += 1;
        }
        last = v.signum();
    }
    vars
}

/// Remainder of a by b; None when the division is numerically degenerate.
fn poly_rem(a: &Polynomial<f64>, b: &Polynomial<f64>) -> Option<Polynomial<f64>> {
    let db = b.degree()?;
    let lead_b = *b.leading()?;
    if lead_b.abs() < 1e-12 {
        return None;
    }
    let mut rem: Vec<f64> = a.coeffs().to_vec();
    while rem.len() > db {
        let k = rem.len() - 1;
        let factor = rem[k] / lead_b;
        if !factor.is_finite() {
            return None;
        }
        for j in 0..=db {
            rem[k - db + j] -= factor * b.coeffs()[j];
        }
        rem.pop();
    }
    Some(Polynomial::new(rem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_rational::BigRational;
    use proptest::prelude::*;

    const SQRT_2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn advance_matches_closed_forms() {
        // n = 1 truncation at gamma = 0: a_1 = sqrt(2), a_2 = 0
        let st = advance_recurrence(0.0, SQRT_2, 2.0, 2).unwrap();
        assert_abs_diff_eq!(st.coeffs[1], SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(st.coeffs[2], 0.0, epsilon = 1e-15);

        // ground oscillator: beta = 0, kappa = 0 kills everything
        let st = advance_recurrence(0.0, 0.0, 0.0, 2).unwrap();
        assert_eq!(st.coeffs[1], 0.0);
        assert_eq!(st.coeffs[2], 0.0);

        // n = 2 middle root at gamma = 1: a_2 = -1/(gamma+1) = -1/2
        let st = advance_recurrence(1.0, 0.0, 4.0, 3).unwrap();
        assert_eq!(st.coeffs[1], 0.0);
        assert_abs_diff_eq!(st.coeffs[2], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(st.coeffs[3], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn advance_rejects_bad_input() {
        assert!(advance_recurrence(-1.0, 0.0, 0.0, 3).is_err());
        assert!(advance_recurrence(0.0, 0.0, 0.0, 0).is_err());
    }

    #[test]
    fn coefficients_satisfy_the_relation_on_recomputation() {
        let (gamma, beta, kappa) = (1.5, 0.7, 3.2);
        let st = advance_recurrence(gamma, beta, kappa, 12).unwrap();
        assert_eq!(st.coeffs[0], 1.0);
        for j in 0..=10usize {
            let jf = j as f64;
            let want = (beta * st.coeffs[j + 1] + (2.0 * jf - kappa) * st.coeffs[j])
                / ((jf + 2.0) * (2.0 * gamma + jf + 2.0));
            assert_eq!(st.coeffs[j + 2], want);
        }
    }

    #[test]
    fn truncation_polynomial_low_orders() {
        // n = 0: a_1 = beta / (2 gamma + 1)
        let tp = truncation_polynomial(0, 3.0).unwrap();
        assert_eq!(tp.coeffs_in_beta.len(), 2);
        assert_eq!(tp.coeffs_in_beta[0], 0.0);
        assert_abs_diff_eq!(tp.coeffs_in_beta[1], 1.0 / 7.0, epsilon = 1e-16);

        // n = 1, gamma = 0: roots +-sqrt(2) => a_2 ~ beta^2 - 2
        let tp = truncation_polynomial(1, 0.0).unwrap();
        let p = Polynomial::new(tp.coeffs_in_beta);
        assert_abs_diff_eq!(p.eval(&SQRT_2), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.eval(&-SQRT_2), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn exact_and_float_recurrence_agree() {
        for n in [0u32, 1, 3, 6] {
            for gamma in [0.0, 0.5, 1.0, 2.75] {
                let exact = truncation_polynomial_in::<BigRational>(
                    n,
                    BigRational::from_float(gamma).unwrap(),
                )
                .map_to_f64();
                let float = truncation_polynomial_in::<f64>(n, gamma);
                for (a, b) in exact.coeffs().iter().zip(float.coeffs()) {
                    assert_abs_diff_eq!(a, b, epsilon = 1e-13 * (1.0 + a.abs()));
                }
            }
        }
    }

    #[test]
    fn roots_match_radical_closed_forms() {
        for gamma in [0.0, 0.5, 1.0, 2.0] {
            let sols = truncation_roots(1, gamma).unwrap();
            let want = (2.0 * (2.0 * gamma + 1.0)).sqrt();
            assert_eq!(sols.len(), 2);
            assert_abs_diff_eq!(sols[0].beta_root, want, epsilon = 1e-12);
            assert_abs_diff_eq!(sols[1].beta_root, -want, epsilon = 1e-12);
            assert_eq!(sols[0].w_exact, 2.0 * (gamma + 2.0));

            let sols = truncation_roots(2, gamma).unwrap();
            let want = 2.0 * (4.0 * gamma + 3.0).sqrt();
            assert_eq!(sols.len(), 3);
            assert_abs_diff_eq!(sols[0].beta_root, want, epsilon = 1e-12);
            assert_eq!(sols[1].beta_root, 0.0);
            assert_abs_diff_eq!(sols[2].beta_root, -want, epsilon = 1e-12);
        }
    }

    #[test]
    fn quartic_roots_match_radical_forms() {
        // n = 3, gamma = 0: the reduced quadratic in beta^2 gives
        // beta^2 = 20 +- 2 sqrt(73)
        let sols = truncation_roots(3, 0.0).unwrap();
        let outer = (20.0 + 2.0 * 73.0f64.sqrt()).sqrt();
        let inner = (20.0 - 2.0 * 73.0f64.sqrt()).sqrt();
        let got: Vec<f64> = sols.iter().map(|s| s.beta_root).collect();
        for (g, w) in got.iter().zip([outer, inner, -inner, -outer]) {
            assert_abs_diff_eq!(g, &w, epsilon = 1e-10);
        }
        let nodes: Vec<u32> = sols.iter().map(|s| s.node_count).collect();
        assert_eq!(nodes, vec![0, 1, 2, 3]);
    }

    #[test]
    fn low_order_eigenfunction_coefficients() {
        // n = 1 root: a_1 = sqrt(2)/sqrt(2 gamma + 1)
        for gamma in [0.0, 1.0, 2.0] {
            let sols = truncation_roots(1, gamma).unwrap();
            let want = SQRT_2 / (2.0 * gamma + 1.0).sqrt();
            assert_abs_diff_eq!(sols[0].poly_coeffs[1], want, epsilon = 1e-12);
            assert_abs_diff_eq!(sols[1].poly_coeffs[1], -want, epsilon = 1e-12);
        }
        // n = 2 roots: a_1 = 2 sqrt(4 gamma + 3)/(2 gamma + 1), a_2 = 2/(2 gamma + 1);
        // middle root: a_1 = 0, a_2 = -1/(gamma + 1)
        for gamma in [0.0, 1.0] {
            let sols = truncation_roots(2, gamma).unwrap();
            let a1 = 2.0 * (4.0 * gamma + 3.0).sqrt() / (2.0 * gamma + 1.0);
            let a2 = 2.0 / (2.0 * gamma + 1.0);
            assert_abs_diff_eq!(sols[0].poly_coeffs[1], a1, epsilon = 1e-12);
            assert_abs_diff_eq!(sols[0].poly_coeffs[2], a2, epsilon = 1e-12);
            assert_abs_diff_eq!(sols[1].poly_coeffs[1], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(sols[1].poly_coeffs[2], -1.0 / (gamma + 1.0), epsilon = 1e-12);
            assert_abs_diff_eq!(sols[2].poly_coeffs[1], -a1, epsilon = 1e-12);
            assert_abs_diff_eq!(sols[2].poly_coeffs[2], a2, epsilon = 1e-12);
        }
    }

    #[test]
    fn residual_cascade_at_roots() {
        for n in [1u32, 2, 4, 6] {
            for gamma in [0.0, 1.0, 3.0] {
                for sol in truncation_roots(n, gamma).unwrap() {
                    let st = advance_recurrence(gamma, sol.beta_root, 2.0 * f64::from(n), n as usize + 6)
                        .unwrap();
                    for j in (n as usize + 1)..=(n as usize + 6) {
                        assert!(
                            st.coeffs[j].abs() < 1e-10,
                            "a_{j} = {} at n={n} gamma={gamma} root={}",
                            st.coeffs[j],
                            sol.beta_root
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn node_counts_follow_root_order() {
        for n in 0..=6u32 {
            for gamma in [0.0, 1.0] {
                let sols = truncation_roots(n, gamma).unwrap();
                let nodes: Vec<u32> = sols.iter().map(|s| s.node_count).collect();
                let want: Vec<u32> = (0..=n).collect();
                assert_eq!(nodes, want, "n={n} gamma={gamma}");
            }
        }
    }

    #[test]
    fn count_nodes_low_order_cases() {
        // nodeless, one node, two nodes from the n = 1, 2 solutions at gamma = 0
        assert_eq!(count_nodes(&[1.0, SQRT_2]).unwrap(), 0);
        assert_eq!(count_nodes(&[1.0, 0.0, -1.0]).unwrap(), 1);
        let a1 = 2.0 * 3.0f64.sqrt();
        assert_eq!(count_nodes(&[1.0, -a1, 2.0]).unwrap(), 2);
        assert!(count_nodes(&[0.0, 0.0]).is_err());
        // even-multiplicity roots are not sign changes
        assert_eq!(count_nodes(&[1.0, -2.0, 1.0]).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn parity_structure(n in 0u32..=10, gidx in 0usize..4) {
            let gamma = [0.0, 1.0, 2.0, 3.0][gidx];
            let tp = truncation_polynomial(n, gamma).unwrap();
            // coefficients of parity opposite to n+1 vanish identically
            for (k, c) in tp.coeffs_in_beta.iter().enumerate() {
                if (k as u32 + n + 1) % 2 == 1 {
                    prop_assert_eq!(*c, 0.0);
                }
            }
            prop_assert_eq!(tp.coeffs_in_beta.len() as u32, n + 2);
        }

        #[test]
        fn roots_real_sorted_symmetric(n in 0u32..=10, gidx in 0usize..4) {
            let gamma = [0.0, 1.0, 2.0, 3.0][gidx];
            let sols = truncation_roots(n, gamma).unwrap();
            prop_assert_eq!(sols.len() as u32, n + 1);
            for w in sols.windows(2) {
                prop_assert!(w[0].beta_root > w[1].beta_root);
            }
            // multiset symmetric under beta -> -beta
            let m = sols.len();
            for i in 0..m {
                let mirrored = -sols[m - 1 - i].beta_root;
                prop_assert!((sols[i].beta_root - mirrored).abs() <= 1e-9 * (1.0 + mirrored.abs()));
            }
        }
    }
}
