//! Implementations of the CLI subcommands and their report formats.

use crate::{Cli, Command, Failure, Format};
use chrono::{SecondsFormat, Utc};
use coulosc::checks::{run_all, CheckConfig};
use coulosc::model::{
    energy_from_truncation, energy_from_w, reduce, EnergyRecord, PhysicalParams,
};
use coulosc::recurrence::{truncation_roots, TruncationSolution};
use coulosc::variational::{
    expectation_inverse_xi, solve_spectrum, BasisKind, BasisSpec, DEFAULT_BASIS_SIZE,
};
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

pub fn dispatch(cli: Cli) -> Result<ExitCode, Failure> {
    let ctx = Context {
        output: cli.output,
        format: cli.format,
        basis_size: cli.basis_size.unwrap_or(DEFAULT_BASIS_SIZE),
        quick: cli.quick,
        basis_size_overridden: cli.basis_size.is_some(),
    };
    match cli.command {
        Command::Truncate { n, gamma, params } => cmd_truncate(&ctx, n, gamma, params),
        Command::Spectrum {
            gamma,
            beta,
            params,
            states,
            basis_kind,
        } => cmd_spectrum(&ctx, gamma, beta, params, states, &basis_kind),
        Command::Sweep {
            gamma,
            beta_min,
            beta_max,
            steps,
            states,
        } => cmd_sweep(&ctx, gamma, beta_min, beta_max, steps, states),
        Command::Energies { params, states } => cmd_energies(&ctx, params, states),
        Command::Validate => cmd_validate(&ctx),
    }
}

struct Context {
    output: Option<PathBuf>,
    format: Option<Format>,
    basis_size: usize,
    quick: bool,
    basis_size_overridden: bool,
}

impl Context {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, text: String) -> Result<(), Failure> {
        match &self.output {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn emit_json(&self, value: &impl Serialize) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| Failure::run(format!("serialization failed: {e}")))?;
        self.emit(text + "\n")
    }
}

fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Micros, true)
}

// ---------------------------------------------------------------- truncate

#[derive(Serialize)]
struct FrequencyEntry {
    i: u32,
    beta_root: f64,
    /// None for the beta = 0 root, which fixes no frequency.
    omega: Option<f64>,
    energy: Option<f64>,
}

#[derive(Serialize)]
struct TruncateReport {
    generated_at: String,
    command: &'static str,
    n: u32,
    gamma: f64,
    #[serde(rename = "W_exact")]
    w_exact: f64,
    solutions: Vec<TruncationSolution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frequencies: Option<Vec<FrequencyEntry>>,
}

fn cmd_truncate(
    ctx: &Context,
    n: u32,
    gamma: Option<f64>,
    params_path: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    let params = params_path
        .map(PhysicalParams::from_json_file)
        .transpose()?;
    let gamma = match (gamma, &params) {
        (Some(g), None) => g,
        (None, Some(p)) => reduce(p)?.gamma,
        (None, None) => return Err(Failure::usage("provide either --gamma or --params")),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    };
    let solutions = truncation_roots(n, gamma)?;
    let frequencies = params
        .map(|p| {
            solutions
                .iter()
                .map(|sol| {
                    let entry = match energy_from_truncation(n, gamma, sol.beta_root, &p) {
                        Ok(rec) => FrequencyEntry {
                            i: sol.i,
                            beta_root: sol.beta_root,
                            omega: Some(rec.omega),
                            energy: Some(rec.energy),
                        },
                        Err(coulosc::Error::FrequencyUndefined) => FrequencyEntry {
                            i: sol.i,
                            beta_root: sol.beta_root,
                            omega: None,
                            energy: None,
                        },
                        Err(e) => return Err(e),
                    };
                    Ok(entry)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;

    match ctx.format_or(Format::Json) {
        Format::Json => ctx.emit_json(&TruncateReport {
            generated_at: timestamp(),
            command: "truncate",
            n,
            gamma,
            w_exact: 2.0 * (f64::from(n) + gamma + 1.0),
            solutions,
            frequencies,
        })?,
        Format::Csv => {
            let mut text = String::from("n,i,gamma,beta_root,W_exact,node_count,omega,energy,poly_coeffs\n");
            for (idx, sol) in solutions.iter().enumerate() {
                let (omega, energy) = frequencies
                    .as_ref()
                    .map(|f| {
                        (
                            f[idx].omega.map(|v| v.to_string()).unwrap_or_default(),
                            f[idx].energy.map(|v| v.to_string()).unwrap_or_default(),
                        )
                    })
                    .unwrap_or_default();
                let coeffs: Vec<String> = sol.poly_coeffs.iter().map(|c| c.to_string()).collect();
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    sol.n,
                    sol.i,
                    sol.gamma,
                    sol.beta_root,
                    sol.w_exact,
                    sol.node_count,
                    omega,
                    energy,
                    coeffs.join(";")
                ));
            }
            ctx.emit(text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- spectrum

#[derive(Serialize)]
struct SpectrumReport {
    generated_at: String,
    gamma: f64,
    beta: f64,
    basis_kind: BasisKind,
    basis_size: usize,
    eigenvalues: Vec<f64>,
    convergence: Option<Vec<f64>>,
    expectation_inv_xi: Vec<f64>,
}

fn solve_with_expectations(
    gamma: f64,
    beta: f64,
    states: usize,
    size: usize,
    kind: BasisKind,
) -> Result<SpectrumReport, coulosc::Error> {
    let basis = BasisSpec::new(gamma, size, kind)?;
    let res = solve_spectrum(&basis, beta, states)?;
    let expectation_inv_xi = res
        .eigenvector_coeffs
        .iter()
        .map(|c| expectation_inverse_xi(c, &basis).map(|e| e.value))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumReport {
        generated_at: timestamp(),
        gamma,
        beta,
        basis_kind: res.basis_kind,
        basis_size: res.basis_size,
        eigenvalues: res.eigenvalues,
        convergence: res.convergence_estimate,
        expectation_inv_xi,
    })
}

fn cmd_spectrum(
    ctx: &Context,
    gamma: Option<f64>,
    beta: Option<f64>,
    params_path: Option<PathBuf>,
    states: usize,
    basis_kind: &str,
) -> Result<ExitCode, Failure> {
    let kind: BasisKind = basis_kind.parse().map_err(Failure::usage)?;
    let (gamma, beta) = match (gamma, beta, params_path) {
        (Some(g), Some(b), None) => (g, b),
        (None, None, Some(path)) => {
            let p = PhysicalParams::from_json_file(path)?;
            let r = reduce(&p)?;
            (r.gamma, r.beta)
        }
        _ => return Err(Failure::usage("provide --gamma and --beta, or --params")),
    };
    let report = solve_with_expectations(gamma, beta, states, ctx.basis_size, kind)?;
    match ctx.format_or(Format::Json) {
        Format::Json => ctx.emit_json(&report)?,
        Format::Csv => {
            let mut text = String::from("beta,state_index,W,inv_xi_expectation\n");
            for (j, w) in report.eigenvalues.iter().enumerate() {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    beta, j, w, report.expectation_inv_xi[j]
                ));
            }
            ctx.emit(text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- sweep

#[derive(Serialize)]
struct SweepRow {
    beta: f64,
    state_index: usize,
    #[serde(rename = "W")]
    w: f64,
    inv_xi_expectation: f64,
}

#[derive(Serialize)]
struct SweepReport {
    generated_at: String,
    gamma: f64,
    states: usize,
    rows: Vec<SweepRow>,
    failed_betas: Vec<f64>,
}

fn cmd_sweep(
    ctx: &Context,
    gamma: f64,
    beta_min: f64,
    beta_max: f64,
    steps: usize,
    states: usize,
) -> Result<ExitCode, Failure> {
    if steps < 2 {
        return Err(Failure::usage("--steps must be at least 2"));
    }
    if !(beta_min < beta_max) {
        return Err(Failure::usage(format!(
            "--beta-min must be strictly below --beta-max, got [{beta_min}, {beta_max}]"
        )));
    }
    let betas: Vec<f64> = (0..steps)
        .map(|i| beta_min + (beta_max - beta_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let size = ctx.basis_size;

    // independent problems; collect preserves the beta order
    let solved: Vec<(f64, Result<SpectrumReport, coulosc::Error>)> = betas
        .par_iter()
        .map(|&beta| {
            (
                beta,
                solve_with_expectations(gamma, beta, states, size, BasisKind::OrthonormalOscillator),
            )
        })
        .collect();

    let mut rows: Vec<SweepRow> = Vec::new();
    let mut failed = Vec::new();
    for (beta, res) in &solved {
        match res {
            Ok(rep) => {
                for (j, w) in rep.eigenvalues.iter().enumerate() {
                    rows.push(SweepRow {
                        beta: *beta,
                        state_index: j,
                        w: *w,
                        inv_xi_expectation: rep.expectation_inv_xi[j],
                    });
                }
            }
            Err(e) => {
                eprintln!("warning: solver failed at beta = {beta}: {e}");
                failed.push(*beta);
            }
        }
    }

    // the Hellmann-Feynman theorem makes every eigenvalue increase with beta
    let mut monotone = true;
    for j in 0..states {
        let series: Vec<f64> = rows
            .iter()
            .filter(|r| r.state_index == j)
            .map(|r| r.w)
            .collect();
        if series.windows(2).any(|w| w[1] <= w[0]) {
            eprintln!("warning: W_{j} is not strictly increasing along the sweep");
            monotone = false;
        }
    }

    match ctx.format_or(Format::Csv) {
        Format::Csv => {
            let mut text = String::from("beta,state_index,W,inv_xi_expectation\n");
            let mut by_beta = rows.iter().peekable();
            for (beta, res) in &solved {
                if res.is_ok() {
                    while let Some(row) = by_beta.peek() {
                        if row.beta != *beta {
                            break;
                        }
                        let row = by_beta.next().unwrap();
                        text.push_str(&format!(
                            "{},{},{},{}\n",
                            row.beta, row.state_index, row.w, row.inv_xi_expectation
                        ));
                    }
                } else {
                    // flagged row for the failed point
                    text.push_str(&format!("{beta},,,\n"));
                }
            }
            ctx.emit(text)?;
        }
        Format::Json => ctx.emit_json(&SweepReport {
            generated_at: timestamp(),
            gamma,
            states,
            rows,
            failed_betas: failed.clone(),
        })?,
    }

    if failed.is_empty() && monotone {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

// ---------------------------------------------------------------- energies

#[derive(Serialize)]
struct TruncationEntry {
    n: u32,
    i: u32,
    beta_root: f64,
    node_count: u32,
    omega: Option<f64>,
    energy: Option<f64>,
}

#[derive(Serialize)]
struct TruncationReference {
    caveat: String,
    entries: Vec<TruncationEntry>,
}

#[derive(Serialize)]
struct EnergiesReport {
    generated_at: String,
    params: PhysicalParams,
    gamma: f64,
    beta: f64,
    basis_size: usize,
    true_energies: Vec<EnergyRecord>,
    truncation_reference: TruncationReference,
}

const TRUNCATION_CAVEAT: &str = "each entry below is an eigenvalue of its own potential \
    (the root fixes a different beta and omega); unlike true_energies, these values are \
    not levels of one spectrum";

fn cmd_energies(ctx: &Context, params_path: PathBuf, states: usize) -> Result<ExitCode, Failure> {
    let params = PhysicalParams::from_json_file(params_path)?;
    let problem = reduce(&params)?;
    let basis = BasisSpec::new(
        problem.gamma,
        ctx.basis_size,
        BasisKind::OrthonormalOscillator,
    )?;
    let res = solve_spectrum(&basis, problem.beta, states)?;
    let true_energies = res
        .eigenvalues
        .iter()
        .map(|&w| energy_from_w(w, params.omega, &params))
        .collect::<Result<Vec<_>, _>>()?;

    let mut entries = Vec::new();
    for n in 0..=2u32 {
        for sol in truncation_roots(n, problem.gamma)? {
            let (omega, energy) = match energy_from_truncation(n, problem.gamma, sol.beta_root, &params)
            {
                Ok(rec) => (Some(rec.omega), Some(rec.energy)),
                Err(coulosc::Error::FrequencyUndefined) => (None, None),
                Err(e) => return Err(e.into()),
            };
            entries.push(TruncationEntry {
                n,
                i: sol.i,
                beta_root: sol.beta_root,
                node_count: sol.node_count,
                omega,
                energy,
            });
        }
    }

    let report = EnergiesReport {
        generated_at: timestamp(),
        params,
        gamma: problem.gamma,
        beta: problem.beta,
        basis_size: basis.size,
        true_energies,
        truncation_reference: TruncationReference {
            caveat: TRUNCATION_CAVEAT.to_string(),
            entries,
        },
    };

    match ctx.format_or(Format::Json) {
        Format::Json => ctx.emit_json(&report)?,
        Format::Csv => {
            let mut text = String::from("source,state,n,i,W,omega,energy\n");
            for (j, rec) in report.true_energies.iter().enumerate() {
                text.push_str(&format!(
                    "true,{},,,{},{},{}\n",
                    j, rec.w, params.omega, rec.energy
                ));
            }
            for e in &report.truncation_reference.entries {
                text.push_str(&format!(
                    "truncation,,{},{},{},{},{}\n",
                    e.n,
                    e.i,
                    2.0 * (f64::from(e.n) + problem.gamma + 1.0),
                    e.omega.map(|v| v.to_string()).unwrap_or_default(),
                    e.energy.map(|v| v.to_string()).unwrap_or_default()
                ));
            }
            ctx.emit(text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- validate

#[derive(Serialize)]
struct ValidateReport {
    generated_at: String,
    passed: bool,
    outcomes: Vec<OutcomeRecord>,
}

#[derive(Serialize)]
struct OutcomeRecord {
    id: String,
    name: String,
    passed: bool,
    details: String,
}

fn cmd_validate(ctx: &Context) -> Result<ExitCode, Failure> {
    let config = CheckConfig {
        quick: ctx.quick,
        basis_size: if ctx.basis_size_overridden {
            Some(ctx.basis_size)
        } else {
            None
        },
    };
    let outcomes = run_all(&config);
    let all_passed = outcomes.iter().all(|o| o.passed);
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<28}  {}", o.id, o.details);
    }
    if ctx.output.is_some() || ctx.format == Some(Format::Json) {
        let report = ValidateReport {
            generated_at: timestamp(),
            passed: all_passed,
            outcomes: outcomes
                .into_iter()
                .map(|o| OutcomeRecord {
                    id: o.id.to_string(),
                    name: o.name.to_string(),
                    passed: o.passed,
                    details: o.details,
                })
                .collect(),
        };
        if ctx.output.is_some() {
            ctx.emit_json(&report)?;
        } else {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
    }
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
