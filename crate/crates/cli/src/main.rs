//! Command-line front end: truncation analysis, spectrum computation,
//! beta sweeps, physical-energy mapping, and the validation suite.

mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "coulosc",
    version,
    about = "Spectral toolkit for the radial problem with potential beta/xi + xi^2",
    long_about = "Computes the exact polynomial (truncation) solutions of the radial \
                  eigenproblem with potential beta/xi + xi^2 and the full bound-state \
                  spectrum at arbitrary beta, with an independent grid solver for \
                  cross-checks. All physical formulas use natural units hbar = c = 1."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format (default: json, except `sweep` which defaults to csv)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Variational basis size (default 40)
    #[arg(long, global = true)]
    basis_size: Option<usize>,

    /// Run only the fast subset of the validation suite
    #[arg(long, global = true)]
    quick: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact polynomial solutions: all roots of the truncation condition
    Truncate {
        /// Polynomial degree n of the eigenfunction factor
        #[arg(long)]
        n: u32,
        /// Exponent gamma of the reduced problem
        #[arg(long, conflicts_with = "params")]
        gamma: Option<f64>,
        /// Physical-parameter JSON file (gamma and the frequencies follow from it)
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Lowest eigenvalues of the reduced problem at one (gamma, beta)
    Spectrum {
        #[arg(long, conflicts_with = "params", requires = "beta", allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long, conflicts_with = "params", requires = "gamma", allow_negative_numbers = true)]
        beta: Option<f64>,
        /// Physical-parameter JSON file (reduced to gamma and beta)
        #[arg(long)]
        params: Option<PathBuf>,
        /// Number of eigenvalues to report
        #[arg(long, default_value_t = 4)]
        states: usize,
        /// Basis kind: raw-monomial or orthonormal-oscillator
        #[arg(long, default_value = "orthonormal-oscillator")]
        basis_kind: String,
    },
    /// Tabulate eigenvalues and <1/xi> over a range of beta
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta_max: f64,
        /// Number of beta samples (endpoints included)
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 4)]
        states: usize,
    },
    /// Physical energies from a parameter file: true spectrum vs truncation
    Energies {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 4)]
        states: usize,
    },
    /// Run the validation suite and report per-check status
    Validate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.exit_code)
        }
    }
}

pub(crate) struct Failure {
    pub message: String,
    pub exit_code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            exit_code: 2,
        }
    }

    fn run(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            exit_code: 1,
        }
    }
}

impl From<coulosc::Error> for Failure {
    fn from(err: coulosc::Error) -> Self {
        use coulosc::Error::*;
        match err {
            ParamFile(_) | InvalidParameter { .. } | InvalidInput(_) | BasisTooLarge { .. }
            | Domain(_) => Failure::usage(err.to_string()),
            _ => Failure::run(err.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::run(err.to_string())
    }
}
