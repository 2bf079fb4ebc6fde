//! Adaptive Simpson quadrature for integrands on (0, inf) with Gaussian decay.
//!
//! Test oracle only: production matrix elements come from closed Gamma-moment
//! forms, and the tests compare those against this routine.
//!
//! The integral is evaluated after the substitution xi = t^2, which turns the
//! half-integer powers common in this problem into smooth integer powers at
//! the origin and sharpens the tail decay to exp(-t^4).

use crate::error::{Error, Result};

const TARGET_ABS: f64 = 1e-12;
const MAX_DEPTH: usize = 48;
/// Smallest substitution coordinate ever passed to the integrand. Keeps
/// xi = t^2 large enough that 1/xi^2 factors cannot overflow; the skipped
/// (0, 1e-20) tail is far below the accuracy target for integrable moments.
const T_FLOOR: f64 = 1e-20;

/// Integrate `f` over (0, inf) assuming the integrand decays like exp(-xi^2).
///
/// Absolute accuracy is about 1e-11 for the moment-type integrands this
/// project uses.
pub fn adaptive_quad(f: impl Fn(f64) -> f64) -> Result<f64> {
    let g = |t: f64| 2.0 * t * f(t * t);

    if !g(T_FLOOR).is_finite() {
        return Err(Error::Accuracy(format!(
            "integrand not finite near the origin (xi = {:.1e})",
            T_FLOOR * T_FLOOR
        )));
    }

    // locate the effective decay cutoff in the substituted coordinate
    let mut peak = 0.0f64;
    let mut cutoff = None;
    let mut quiet = 0usize;
    let mut t = 0.125f64;
    while t <= 16.0 {
        let v = g(t).abs();
        if !v.is_finite() {
            return Err(Error::Accuracy(format!(
                "integrand not finite at xi = {}",
                t * t
            )));
        }
        peak = peak.max(v);
        if v <= 1e-18 * (1.0 + peak) {
            quiet += 1;
            if quiet >= 8 {
                cutoff = Some(t);
                break;
            }
        } else {
            quiet = 0;
        }
        t += 0.125;
    }
    let upper = cutoff.ok_or_else(|| {
        Error::Accuracy("integrand does not decay within the scan window".into())
    })?;

    let panels = 16usize;
    let h = upper / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = (p as f64 * h).max(T_FLOOR);
        let b = (p as f64 + 1.0) * h;
        let fa = g(a);
        let fb = g(b);
        let m = 0.5 * (a + b);
        let fm = g(m);
        let whole = simpson(fa, fm, fb, b - a);
        total += adaptive(&g, a, b, fa, fb, fm, whole, TARGET_ABS / panels as f64, 0)?;
    }
    Ok(total)
}

fn simpson(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    // floor the tolerance at the local rounding noise so refinement stops
    // once the estimates are machine-accurate; the factor covers integrands
    // whose evaluation carries a few ulps of cancellation noise
    let tol_eff = tol.max(8.0 * f64::EPSILON * (left.abs() + right.abs()));
    if delta.abs() <= 15.0 * tol_eff || (b - a) <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Accuracy(format!(
            "adaptive quadrature stalled on [{a}, {b}]"
        )));
    }
    let half = 0.5 * tol;
    Ok(adaptive(f, a, m, fa, fm, flm, left, half, depth + 1)?
        + adaptive(f, m, b, fm, fb, frm, right, half, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gaussian_moments() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let q = adaptive_quad(|x| x * (-x * x).exp()).unwrap();
        assert_abs_diff_eq!(q, 0.5, epsilon = 1e-11);
        let q = adaptive_quad(|x| x * x * (-x * x).exp()).unwrap();
        assert_abs_diff_eq!(q, sqrt_pi / 4.0, epsilon = 1e-11);
        // gamma = 2 moment: xi^5 exp(-xi^2) integrates to Gamma(3)/2 = 1
        let q = adaptive_quad(|x| x.powi(5) * (-x * x).exp()).unwrap();
        assert_abs_diff_eq!(q, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn fractional_powers_at_origin() {
        // Gamma(1/4 + 1/2)/2 for the xi^(-1/2) moment
        let want = 0.5 * crate::numerics::gamma_fn(0.75).unwrap();
        let q = adaptive_quad(|x| x.powf(-0.5) * x * (-x * x).exp()).unwrap();
        assert_abs_diff_eq!(q, want, epsilon = 1e-11);
    }

    #[test]
    fn rejects_non_decaying_integrand() {
        assert!(adaptive_quad(|_| 1.0).is_err());
    }
}
