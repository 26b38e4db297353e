//! `csl`: command-line front end for the critical-strip zeta laboratory.
//!
//! Exit codes: 0 success, 1 tolerance or assertion failure (including
//! numerical-domain errors), 2 usage or input parse error.

pub mod commands;
pub mod complex_arg;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use csl_core::{ComplexValue, CslError, EvalConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "CSL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "csl", version, about = "Zeta-function experiments in the critical strip")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the partial sums and the eta representation at one point.
    Eval(EvalArgs),
    /// Functional-equation residuals over a rectangular grid (CSV).
    Residual(ResidualArgs),
    /// Scan the critical line for zeros, optionally cross-checking a table.
    Zeros(ZerosArgs),
    /// Doubling-ratio experiment for Hₙ and ζ̂ₙ at a point or a zero.
    Doubling(DoublingArgs),
    /// Truncation-error scaling of ζ̂ₙ over a power-of-two n grid.
    Errscan(ErrscanArgs),
}

fn complex_value(s: &str) -> Result<ComplexValue, String> {
    complex_arg::parse_complex(s)
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Series truncation n.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Option<u64>,
    /// Tail-average the eta series (true/false).
    #[arg(long)]
    pub accelerate: Option<bool>,
    /// Number of averaging passes.
    #[arg(long)]
    pub accel_order: Option<usize>,
    /// The constant C > 1 of the validity domain |Im z| <= 2πn/C.
    #[arg(long)]
    pub hl_constant: Option<f64>,
    #[arg(long)]
    pub guard_radius: Option<f64>,
    /// Refinement tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

impl ConfigArgs {
    pub fn resolve(&self, accelerate_default: bool) -> EvalConfig {
        let d = EvalConfig::default();
        EvalConfig {
            n_terms: self.n.map_or(d.n_terms, |n| n as usize),
            accelerate: self.accelerate.unwrap_or(accelerate_default),
            accel_order: self.accel_order.unwrap_or(d.accel_order),
            hl_constant: self.hl_constant.unwrap_or(d.hl_constant),
            guard_radius: self.guard_radius.unwrap_or(d.guard_radius),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Point as a+bi.
    #[arg(long, value_parser = complex_value, allow_hyphen_values = true)]
    pub z: ComplexValue,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub re_min: f64,
    #[arg(long, default_value_t = 0.9, allow_hyphen_values = true)]
    pub re_max: f64,
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u64).range(1..))]
    pub re_steps: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub im_min: f64,
    #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
    pub im_max: f64,
    #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u64).range(1..))]
    pub im_steps: u64,
    /// Exit 1 when the largest residual exceeds this.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// CSV destination (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long, default_value_t = 10.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 50.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = csl_core::zeros::DEFAULT_SCAN_STEP)]
    pub step: f64,
    /// Zero table to cross-check against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Matching tolerance for the cross-check.
    #[arg(long, default_value_t = 1e-6)]
    pub match_tol: f64,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["z", "zero_index"])))]
pub struct DoublingArgs {
    /// Point as a+bi.
    #[arg(long, value_parser = complex_value, allow_hyphen_values = true)]
    pub z: Option<ComplexValue>,
    /// 1-based index into the zero table.
    #[arg(long)]
    pub zero_index: Option<usize>,
    /// Zero table for --zero-index (the bundled first-30 table otherwise).
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Refine the table ordinate with the zero finder before measuring.
    #[arg(long)]
    pub refine: bool,
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    pub nbase: u64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ErrscanArgs {
    /// Point as a+bi.
    #[arg(long, value_parser = complex_value, allow_hyphen_values = true)]
    pub z: ComplexValue,
    /// Smallest grid n (a power of two multiple grid nmin·2^k <= nmax).
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    pub nmin: u64,
    #[arg(long, default_value_t = 65536, value_parser = clap::value_parser!(u64).range(1..))]
    pub nmax: u64,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the (n, error) pairs here as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// A finished command: its primary report and summary lines.
#[derive(Debug)]
pub struct Outcome {
    /// Report text for stdout; `None` when it went to a file.
    pub stdout: Option<String>,
    /// Human-readable summary lines for stderr.
    pub summary: Vec<String>,
    pub code: i32,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<CslError> for CliError {
    fn from(e: CslError) -> Self {
        let code = match e {
            CslError::Parse { .. }
            | CslError::NonMonotonic { .. }
            | CslError::Io { .. }
            | CslError::InvalidInput(_)
            | CslError::InvalidConfig(_)
            | CslError::InvalidWindow(_)
            | CslError::WindowTooCoarse { .. } => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // a second build in the same process (tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

pub fn execute(cli: Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Residual(a) => commands::cmd_residual(a),
        Command::Zeros(a) => commands::cmd_zeros(a),
        Command::Doubling(a) => commands::cmd_doubling(a),
        Command::Errscan(a) => commands::cmd_errscan(a),
    }
}

/// Parse arguments, run, print, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(outcome) => {
            if let Some(text) = outcome.stdout {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(text.as_bytes());
                let _ = stdout.flush();
            }
            for line in outcome.summary {
                eprintln!("{line}");
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
