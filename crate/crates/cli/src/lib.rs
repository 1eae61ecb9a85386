//! The `qcc` command line: argument definitions, command drivers and exit codes.
//!
//! Data goes to stdout as an [`OutputRecord`] in CSV or JSON; diagnostics and
//! human-readable summaries go to stderr.

pub mod args;
pub mod commands;
pub mod output;

use clap::{Parser, Subcommand};
use thiserror::Error;

use args::{FloatGrid, IntList, IntRange};
pub use output::{Cell, Column, Format, Kind, OutputRecord};
use qcc_core::sampler::Estimator;
use qcc_core::success::Scheme;
use qcc_core::tracywidom::Method;

/// Stable process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Unexpected internal failure (e.g. an unresolvable decomposition).
    pub const INTERNAL: i32 = 1;
    /// Bad flags or values, including size-guard violations.
    pub const USAGE: i32 = 2;
    /// Exact enumeration is too large; use `qcc sample` instead.
    pub const INFEASIBLE: i32 = 3;
    /// A Tracy–Widom evaluation failed to converge.
    pub const NOT_CONVERGED: i32 = 4;
    /// A scaled position rounds to a color count outside `[1, n]`.
    pub const D_OUT_OF_RANGE: i32 = 5;
    /// The command ran but one of its own checks failed (`verify`, `tw selftest`).
    pub const CHECK_FAILED: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qcc_core::Error),
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use qcc_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Malformed(_) => exit::USAGE,
            CliError::Core(e) => match e {
                E::InvalidArgument(_) | E::NonFinite(_) | E::SizeGuard { .. } => exit::USAGE,
                E::FeasibilityExceeded { .. } => exit::INFEASIBLE,
                E::ConvergenceFailure { .. } => exit::NOT_CONVERGED,
                E::DOutOfRange { .. } => exit::D_OUT_OF_RANGE,
                E::DegeneracyUnresolved(_) => exit::INTERNAL,
            },
            CliError::Io(_) => exit::INTERNAL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qcc",
    version,
    about = "Success probabilities of (extended) quantum color coding"
)]
pub struct Cli {
    /// Output encoding for the result record.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact success probabilities over a grid of (n, d).
    Table(TableArgs),
    /// Monte Carlo estimate of a success probability for large n.
    Sample(SampleArgs),
    /// Tracy–Widom distribution tools.
    #[command(subcommand)]
    Tw(TwCommand),
    /// Build the optimal measurement at a tiny size and check it against the closed form.
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args)]
pub struct TableArgs {
    /// Number of boxes: an integer or an inclusive range `a..b`.
    #[arg(long, value_parser = args::parse_range)]
    pub n: IntRange,
    /// Number of colors: an integer or an inclusive range `a..b`.
    #[arg(long, value_parser = args::parse_range)]
    pub d: IntRange,
    /// classical | nonextended | extended-limited | extended
    #[arg(long, default_value = "extended")]
    pub scheme: Scheme,
    /// Ancilla dimension |R| (extended-limited only; default 1).
    #[arg(long)]
    pub ancilla: Option<num_bigint::BigUint>,
    /// Emit one row per partition with its contribution instead of totals.
    #[arg(long)]
    pub breakdown: bool,
}

#[derive(Debug, clap::Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// extended | nonextended
    #[arg(long, default_value = "extended")]
    pub estimator: Estimator,
}

#[derive(Debug, Subcommand)]
pub enum TwCommand {
    /// Evaluate F_TW on a list `a,b,c` or grid `start:stop:step`.
    Eval {
        #[arg(long, value_parser = args::parse_grid, allow_hyphen_values = true)]
        x: FloatGrid,
        /// painleve | fredholm
        #[arg(long, default_value = "fredholm")]
        method: Method,
    },
    /// Cross-check both evaluation methods on [-6, 4].
    Selftest,
    /// Compare μ_n{r₁ ≤ d} with F_TW at d = round(2√n + x n^{1/6}).
    #[command(name = "theoremB")]
    TheoremB {
        #[arg(long, value_parser = args::parse_int_list)]
        n: IntList,
        #[arg(long, value_parser = args::parse_grid, allow_hyphen_values = true)]
        x: FloatGrid,
        #[arg(long, default_value_t = 200_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// At most 4.
    #[arg(long)]
    pub n: usize,
    /// At most 3.
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub ancilla: usize,
}

/// Reads `QCC_THREADS`; `None` when unset.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("QCC_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(CliError::Usage(format!(
                "QCC_THREADS must be a positive integer, got `{s}`"
            ))),
        },
    }
}
