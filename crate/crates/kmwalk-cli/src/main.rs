//! Command-line interface for the urn-walk toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 identity-check failure,
//! 3 numeric-conditioning failure.

mod commands;
mod output;
mod parse;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "kmwalk",
    about = "Urn random walks driven by polynomials of a tridiagonal chain: \
             spectra, matrix-valued orthogonal polynomials, spectral n-step \
             formulas, and Monte Carlo cross-checks",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// Double-precision floats.
    Real,
    /// Exact arbitrary-precision rationals.
    Rational,
}

#[derive(Args)]
pub struct ModelArgs {
    /// Ball count N (the states are 0..=N)
    #[arg(long = "N")]
    pub n: usize,

    /// Model variant; inferred from the parameter flags when omitted
    #[arg(long)]
    pub model: Option<String>,

    /// Deformation parameter for the q-deformed model ("1/3" or "0.3")
    #[arg(long)]
    pub q: Option<String>,

    /// Batch size for the k-ball model
    #[arg(long)]
    pub k: Option<usize>,

    /// Mixture weights for the multi-ball model, comma separated
    #[arg(long)]
    pub qvec: Option<String>,

    /// Batch sizes for the multi-ball model, comma separated
    #[arg(long)]
    pub kvec: Option<String>,

    /// Numeric backend
    #[arg(long, value_enum, default_value_t = Backend::Real)]
    pub backend: Backend,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Emit JSON instead of CSV/text
    #[arg(long)]
    pub json: bool,

    /// Write to a file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print the transition matrix, row-major
    Build {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Analytic spectrum with multiplicity classes and spectral gaps
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Critical deformation parameters and double-eigenvalue counts
    Multiplicity {
        /// Ball count N
        #[arg(long = "N")]
        n: usize,
        /// Report a single q instead of sweeping the critical set
        #[arg(long)]
        q: Option<String>,
        /// Numeric backend
        #[arg(long, value_enum, default_value_t = Backend::Rational)]
        backend: Backend,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the identity suites (map polynomial, scalar link, block
    /// orthogonality, batch recurrences, spectral powers)
    Check {
        /// Ball count N (odd, so the states split into 2x2 blocks)
        #[arg(long = "N")]
        n: usize,
        /// Deformation parameter
        #[arg(long)]
        q: String,
        /// Numeric backend
        #[arg(long, value_enum, default_value_t = Backend::Rational)]
        backend: Backend,
        /// Largest power checked in the spectral-formula suite
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo simulation scored against the spectral formula
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Start state
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Number of steps (the comparison time)
        #[arg(long)]
        steps: usize,
        /// Number of trajectories
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0 = default pool)
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eigenvalue curves of the q-deformed model over a q-grid
    Fig1 {
        /// Ball count N
        #[arg(long = "N")]
        n: usize,
        /// Grid start:end:step
        #[arg(long = "q-grid", default_value = "0:1:0.005")]
        q_grid: String,
        /// Numeric backend
        #[arg(long, value_enum, default_value_t = Backend::Real)]
        backend: Backend,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eigenvalues of the (1-q, q) mixture of 1-ball and k-ball moves,
    /// over a range of k, flagging the subdominant modulus
    Fig2 {
        /// Ball count N
        #[arg(long = "N")]
        n: usize,
        /// Mixture weight of the k-ball move
        #[arg(long)]
        q: String,
        /// Batch sizes: "4", "1,2,5" or "1..40"
        #[arg(long, default_value = "1..40")]
        k: String,
        /// Numeric backend
        #[arg(long, value_enum, default_value_t = Backend::Real)]
        backend: Backend,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap renders help/version to stdout and errors to stderr
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.code());
        }
    }
}
