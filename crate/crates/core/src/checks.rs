//! Self-check suite: every quantitative claim the toolkit is built around,
//! runnable from the CLI (`validate`) and from the acceptance tests.

use crate::model::{energy_from_truncation, PhysicalParams};
use crate::oracle::{cross_validate, CROSS_VALIDATION_TOLERANCE};
use crate::recurrence::truncation_roots;
use crate::variational::{expectation_inverse_xi, solve_spectrum, BasisKind, BasisSpec};

/// Reference spectra for gamma = 0 at the four benchmark Coulomb couplings:
/// (beta, lowest four eigenvalues).
pub const REFERENCE_SPECTRA: [(f64, [f64; 4]); 4] = [
    (
        std::f64::consts::SQRT_2,
        [4.0, 7.693978891, 11.50604238, 15.37592718],
    ),
    (
        -std::f64::consts::SQRT_2,
        [-1.459587134, 4.0, 8.344349427, 12.53290130],
    ),
    (
        -1.0,
        [-0.2085695649, 4.601041510, 8.834509671, 12.96513798],
    ),
    (1.0, [3.496523196, 7.236061810, 11.08720729, 14.98768617]),
];

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckConfig {
    /// Run the fast subset only.
    pub quick: bool,
    /// Override the variational basis size (the default reproduces the
    /// reference values; small overrides demonstrate under-convergence).
    pub basis_size: Option<usize>,
}

impl CheckConfig {
    fn basis(&self, gamma: f64) -> Result<BasisSpec, crate::error::Error> {
        match self.basis_size {
            Some(n) => BasisSpec::new(gamma, n, BasisKind::OrthonormalOscillator),
            None => BasisSpec::default_for(gamma),
        }
    }
}

/// Run the whole suite (or the quick subset) and collect per-check outcomes.
pub fn run_all(config: &CheckConfig) -> Vec<CheckOutcome> {
    let mut out = vec![
        golden_spectra(config),
        truncation_closed_forms(),
        exact_oscillator_limit(config),
    ];
    if !config.quick {
        out.push(single_eigenvalue_per_root(config));
        out.push(hellmann_feynman(config));
        out.push(oracle_equivalence(config));
    }
    out.push(node_count_law());
    if !config.quick {
        out.push(ritz_upper_bound(config));
    }
    out.push(truncation_frequencies());
    out
}

fn outcome(id: &'static str, name: &'static str, failures: Vec<String>, ok_note: String) -> CheckOutcome {
    if failures.is_empty() {
        CheckOutcome {
            id,
            name,
            passed: true,
            details: ok_note,
        }
    } else {
        CheckOutcome {
            id,
            name,
            passed: false,
            details: failures.join("; "),
        }
    }
}

/// Criterion 1: the four reference spectra at gamma = 0, each eigenvalue to
/// absolute 1e-6.
fn golden_spectra(config: &CheckConfig) -> CheckOutcome {
    const TOL: f64 = 1e-6;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let cases: &[(f64, [f64; 4])] = if config.quick {
        &REFERENCE_SPECTRA[..1]
    } else {
        &REFERENCE_SPECTRA
    };
    for (beta, want) in cases {
        match config
            .basis(0.0)
            .and_then(|b| solve_spectrum(&b, *beta, 4))
        {
            Ok(res) => {
                for (j, (got, want)) in res.eigenvalues.iter().zip(want).enumerate() {
                    let err = (got - want).abs();
                    worst = worst.max(err);
                    if err > TOL {
                        let conv = res
                            .convergence_estimate
                            .as_ref()
                            .map(|c| format!("{:.2e}", c[j]))
                            .unwrap_or_else(|| "n/a".into());
                        failures.push(format!(
                            "beta={beta:+.6}: W_{j} = {got:.10} vs {want:.10} \
                             (|err| = {err:.2e} > {TOL:.0e}; convergence estimate {conv} \
                             suggests the basis is under-converged)"
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("beta={beta:+.6}: solver error: {e}")),
        }
    }
    outcome(
        "golden-spectra",
        "reference spectra at gamma=0 reproduced to 1e-6",
        failures,
        format!("worst |err| = {worst:.2e} over {} spectra", cases.len()),
    )
}

/// Criterion 2: closed-form truncation roots for n = 0, 1, 2 at
/// gamma in {0, 1, 2} to 1e-12; the n = 0 root is exactly zero.
fn truncation_closed_forms() -> CheckOutcome {
    const TOL: f64 = 1e-12;
    let mut failures = Vec::new();
    for gamma in [0.0, 1.0, 2.0] {
        match truncation_roots(0, gamma) {
            Ok(sols) => {
                if sols.len() != 1 || sols[0].beta_root != 0.0 {
                    failures.push(format!("n=0 gamma={gamma}: root not exactly zero"));
                }
            }
            Err(e) => failures.push(format!("n=0 gamma={gamma}: {e}")),
        }
        let want1 = (2.0 * (2.0 * gamma + 1.0)).sqrt();
        match truncation_roots(1, gamma) {
            Ok(sols) => {
                let got: Vec<f64> = sols.iter().map(|s| s.beta_root).collect();
                for (g, w) in got.iter().zip([want1, -want1]) {
                    if (g - w).abs() > TOL {
                        failures.push(format!("n=1 gamma={gamma}: root {g} vs {w}"));
                    }
                }
            }
            Err(e) => failures.push(format!("n=1 gamma={gamma}: {e}")),
        }
        let want2 = 2.0 * (4.0 * gamma + 3.0).sqrt();
        match truncation_roots(2, gamma) {
            Ok(sols) => {
                let got: Vec<f64> = sols.iter().map(|s| s.beta_root).collect();
                for (g, w) in got.iter().zip([want2, 0.0, -want2]) {
                    if (g - w).abs() > TOL {
                        failures.push(format!("n=2 gamma={gamma}: root {g} vs {w}"));
                    }
                }
            }
            Err(e) => failures.push(format!("n=2 gamma={gamma}: {e}")),
        }
    }
    outcome(
        "truncation-closed-forms",
        "n=0,1,2 truncation roots match radical closed forms to 1e-12",
        failures,
        "roots of n=0,1,2 match for gamma in {0,1,2}".into(),
    )
}

/// Criterion 3: the free (beta = 0) spectrum equals 2(2j + gamma + 1) to 1e-8.
fn exact_oscillator_limit(config: &CheckConfig) -> CheckOutcome {
    const TOL: f64 = 1e-8;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for gamma in [0.0, 1.0, 2.0] {
        match config.basis(gamma).and_then(|b| solve_spectrum(&b, 0.0, 4)) {
            Ok(res) => {
                for (j, got) in res.eigenvalues.iter().enumerate() {
                    let want = 2.0 * (2.0 * j as f64 + gamma + 1.0);
                    let err = (got - want).abs();
                    worst = worst.max(err);
                    if err > TOL {
                        failures.push(format!(
                            "gamma={gamma}: W_{j} = {got:.12} vs {want} (|err| = {err:.2e})"
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("gamma={gamma}: solver error: {e}")),
        }
    }
    outcome(
        "exact-oscillator-limit",
        "beta=0 spectra equal 2(2j+gamma+1) to 1e-8",
        failures,
        format!("worst |err| = {worst:.2e}"),
    )
}

/// Criterion 4: each truncation root places exactly one eigenvalue of its
/// potential at 2(n + gamma + 1), at the index given by its node count, and
/// (away from beta = 0, where the potential is the pure oscillator) no other
/// low eigenvalue sits near any value of that form.
fn single_eigenvalue_per_root(config: &CheckConfig) -> CheckOutcome {
    const MATCH_TOL: f64 = 1e-6;
    const SEPARATION: f64 = 0.01;
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for gamma in [0.0, 1.0, 2.0] {
        for n in 0..=4u32 {
            let sols = match truncation_roots(n, gamma) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("roots n={n} gamma={gamma}: {e}"));
                    continue;
                }
            };
            let w_shared = 2.0 * (f64::from(n) + gamma + 1.0);
            let window = n as usize + 3;
            for sol in &sols {
                checked += 1;
                let res = match config
                    .basis(gamma)
                    .and_then(|b| solve_spectrum(&b, sol.beta_root, window))
                {
                    Ok(r) => r,
                    Err(e) => {
                        failures.push(format!(
                            "spectrum at root n={n} gamma={gamma} beta={}: {e}",
                            sol.beta_root
                        ));
                        continue;
                    }
                };
                let matches: Vec<usize> = res
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| (*w - w_shared).abs() < MATCH_TOL)
                    .map(|(j, _)| j)
                    .collect();
                if matches.len() != 1 {
                    failures.push(format!(
                        "n={n} gamma={gamma} beta={:+.6}: {} eigenvalues match W={w_shared} \
                         (expected exactly one)",
                        sol.beta_root,
                        matches.len()
                    ));
                    continue;
                }
                if matches[0] != sol.node_count as usize {
                    failures.push(format!(
                        "n={n} gamma={gamma} beta={:+.6}: match at index {} but node count is {}",
                        sol.beta_root, matches[0], sol.node_count
                    ));
                }
                // at beta = 0 the potential is the oscillator itself and every
                // level has the truncation form, so separation only makes
                // sense for nonzero roots
                if sol.beta_root.abs() > 1e-9 {
                    for (j, w) in res.eigenvalues.iter().enumerate() {
                        if j == matches[0] {
                            continue;
                        }
                        let m_near = ((w / 2.0 - gamma - 1.0).round()).max(0.0);
                        let nearest = 2.0 * (m_near + gamma + 1.0);
                        if (w - nearest).abs() < SEPARATION {
                            failures.push(format!(
                                "n={n} gamma={gamma} beta={:+.6}: W_{j} = {w:.8} lies within \
                                 {SEPARATION} of the truncation form value {nearest}",
                                sol.beta_root
                            ));
                        }
                    }
                }
            }
        }
    }
    outcome(
        "single-eigenvalue-per-root",
        "each truncation root yields exactly one eigenvalue of its potential",
        failures,
        format!("{checked} roots checked (n <= 4, gamma in {{0,1,2}})"),
    )
}

/// Criterion 5: Hellmann-Feynman consistency and monotonicity in beta.
fn hellmann_feynman(config: &CheckConfig) -> CheckOutcome {
    const STEP: f64 = 1e-4;
    const TOL: f64 = 1e-5;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for beta in [-1.0, 0.5, 1.0] {
        let mut run = || -> crate::error::Result<Vec<String>> {
            let basis = config.basis(0.0)?;
            let center = solve_spectrum(&basis, beta, 4)?;
            let plus = solve_spectrum(&basis, beta + STEP, 4)?;
            let minus = solve_spectrum(&basis, beta - STEP, 4)?;
            let mut local = Vec::new();
            for j in 0..4 {
                let fd = (plus.eigenvalues[j] - minus.eigenvalues[j]) / (2.0 * STEP);
                let exp = expectation_inverse_xi(&center.eigenvector_coeffs[j], &basis)?;
                let err = (fd - exp.value).abs();
                worst = worst.max(err);
                if err > TOL || fd <= 0.0 || exp.value <= 0.0 {
                    local.push(format!(
                        "beta={beta}: state {j}: dW/dbeta = {fd:.8} vs <1/xi> = {:.8} \
                         (|err| = {err:.2e})",
                        exp.value
                    ));
                }
            }
            Ok(local)
        };
        match run() {
            Ok(mut local) => failures.append(&mut local),
            Err(e) => failures.push(format!("beta={beta}: {e}")),
        }
    }
    // monotonicity along the benchmark sequence
    let seq = [-std::f64::consts::SQRT_2, -1.0, 1.0, std::f64::consts::SQRT_2];
    let mut prev: Option<Vec<f64>> = None;
    for beta in seq {
        match config.basis(0.0).and_then(|b| solve_spectrum(&b, beta, 4)) {
            Ok(res) => {
                if let Some(p) = &prev {
                    for j in 0..4 {
                        if res.eigenvalues[j] <= p[j] {
                            failures.push(format!(
                                "W_{j} not strictly increasing at beta={beta:+.4}"
                            ));
                        }
                    }
                }
                prev = Some(res.eigenvalues);
            }
            Err(e) => failures.push(format!("beta={beta}: {e}")),
        }
    }
    outcome(
        "hellmann-feynman",
        "dW/dbeta equals <1/xi> to 1e-5 and spectra increase with beta",
        failures,
        format!("worst |dW/dbeta - <1/xi>| = {worst:.2e}"),
    )
}

/// Criterion 6: variational and finite-difference spectra agree to 5e-4 on
/// the (gamma, beta) pairs of the reference checks.
fn oracle_equivalence(config: &CheckConfig) -> CheckOutcome {
    let mut pairs: Vec<(f64, f64)> = REFERENCE_SPECTRA.iter().map(|(b, _)| (0.0, *b)).collect();
    for gamma in [0.0, 1.0, 2.0] {
        pairs.push((gamma, 0.0));
        let r1 = (2.0 * (2.0 * gamma + 1.0)).sqrt();
        let r2 = 2.0 * (4.0 * gamma + 3.0).sqrt();
        pairs.extend([(gamma, r1), (gamma, -r1), (gamma, r2), (gamma, -r2)]);
    }
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for (gamma, beta) in pairs {
        if config.basis_size.is_some() {
            // honor the override by comparing against the overridden solve
            let run = || -> crate::error::Result<f64> {
                let basis = config.basis(gamma)?;
                let v = solve_spectrum(&basis, beta, 4)?;
                let fd = crate::oracle::fd_spectrum(
                    gamma,
                    beta,
                    4,
                    &crate::oracle::GridSpec::default(),
                )?;
                Ok(v.eigenvalues
                    .iter()
                    .zip(&fd.eigenvalues)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max))
            };
            match run() {
                Ok(d) => {
                    worst = worst.max(d);
                    if d > CROSS_VALIDATION_TOLERANCE {
                        failures.push(format!(
                            "gamma={gamma} beta={beta:+.6}: max disagreement {d:.2e}"
                        ));
                    }
                }
                Err(e) => failures.push(format!("gamma={gamma} beta={beta:+.6}: {e}")),
            }
        } else {
            match cross_validate(gamma, beta, 4) {
                Ok(cv) => {
                    let d = cv.abs_diff.iter().copied().fold(0.0, f64::max);
                    worst = worst.max(d);
                    if !cv.flagged.is_empty() {
                        failures.push(format!(
                            "gamma={gamma} beta={beta:+.6}: states {:?} disagree beyond 5e-4 \
                             (max {d:.2e})",
                            cv.flagged
                        ));
                    }
                }
                Err(e) => failures.push(format!("gamma={gamma} beta={beta:+.6}: {e}")),
            }
        }
    }
    outcome(
        "oracle-equivalence",
        "variational and finite-difference spectra agree to 5e-4",
        failures,
        format!("worst disagreement {worst:.2e}"),
    )
}

/// Criterion 7: node counts run 0..n down the sorted roots for n <= 6.
fn node_count_law() -> CheckOutcome {
    let mut failures = Vec::new();
    for gamma in [0.0, 1.0] {
        for n in 0..=6u32 {
            match truncation_roots(n, gamma) {
                Ok(sols) => {
                    let got: Vec<u32> = sols.iter().map(|s| s.node_count).collect();
                    let want: Vec<u32> = (0..=n).collect();
                    if got != want {
                        failures.push(format!("n={n} gamma={gamma}: node counts {got:?}"));
                    }
                }
                Err(e) => failures.push(format!("n={n} gamma={gamma}: {e}")),
            }
        }
    }
    outcome(
        "node-count-law",
        "sorted truncation roots carry node counts 0..n (n <= 6)",
        failures,
        "node counts follow the root order for gamma in {0,1}".into(),
    )
}

/// Criterion 8: Ritz upper bounds are non-increasing in the basis size.
fn ritz_upper_bound(_config: &CheckConfig) -> CheckOutcome {
    // slack for the canonical-orthogonalization noise floor
    const SLACK: f64 = 1e-9;
    let mut failures = Vec::new();
    let mut prev: Option<Vec<f64>> = None;
    for size in [10usize, 20, 30, 40] {
        let run = BasisSpec::new(0.0, size, BasisKind::OrthonormalOscillator)
            .and_then(|b| solve_spectrum(&b, 1.0, 4));
        match run {
            Ok(res) => {
                if let Some(p) = &prev {
                    for j in 0..4 {
                        if res.eigenvalues[j] > p[j] + SLACK {
                            failures.push(format!(
                                "W_{j}(N={size}) = {:.12} rose above the previous size's {:.12}",
                                res.eigenvalues[j], p[j]
                            ));
                        }
                    }
                }
                prev = Some(res.eigenvalues);
            }
            Err(e) => failures.push(format!("N={size}: {e}")),
        }
    }
    outcome(
        "ritz-upper-bound",
        "eigenvalues non-increasing over N in {10,20,30,40}",
        failures,
        "upper-bound property holds at (gamma=0, beta=1)".into(),
    )
}

/// Criterion 9: the frequencies the truncation condition assigns, and the
/// hard error on the frequency-free beta = 0 root.
fn truncation_frequencies() -> CheckOutcome {
    const TOL: f64 = 1e-12;
    let mut failures = Vec::new();
    for (gamma_int, mass) in [(0i64, 1.0), (1, 2.0), (2, 1.0)] {
        let gamma = gamma_int as f64;
        let params = PhysicalParams {
            m: mass,
            g: 1.0,
            b: 1.0,
            b0: 1.0,
            k: 0.0,
            omega: 1.0,
            l: gamma_int,
            s: 1,
        };
        let delta = params.delta();
        for n in [1u32, 2] {
            let sols = match truncation_roots(n, gamma) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("roots n={n} gamma={gamma}: {e}"));
                    continue;
                }
            };
            let want = match n {
                1 => delta * delta / (2.0 * mass * (2.0 * gamma + 1.0)),
                _ => delta * delta / (4.0 * mass * (4.0 * gamma + 3.0)),
            };
            for sol in &sols {
                if sol.beta_root == 0.0 {
                    match energy_from_truncation(n, gamma, sol.beta_root, &params) {
                        Err(crate::error::Error::FrequencyUndefined) => {}
                        other => failures.push(format!(
                            "n={n} gamma={gamma}: beta=0 root should be frequency-undefined, got {other:?}"
                        )),
                    }
                    continue;
                }
                match energy_from_truncation(n, gamma, sol.beta_root, &params) {
                    Ok(rec) => {
                        if (rec.omega - want).abs() > TOL * want.abs() {
                            failures.push(format!(
                                "n={n} gamma={gamma} beta={:+.6}: omega = {} vs {want}",
                                sol.beta_root, rec.omega
                            ));
                        }
                    }
                    Err(e) => failures.push(format!(
                        "n={n} gamma={gamma} beta={:+.6}: {e}",
                        sol.beta_root
                    )),
                }
            }
        }
    }
    outcome(
        "truncation-frequencies",
        "truncation frequencies match their closed forms; beta=0 errors out",
        failures,
        "omega = delta^2/(2m(2gamma+1)) and delta^2/(4m(4gamma+3)) reproduced".into(),
    )
}
