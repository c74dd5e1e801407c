//! Command-line driver: every analysis as a subcommand with deterministic
//! CSV/TSV output suitable for plotting and golden-file diffing.
//!
//! Exit codes: 0 success, 2 parameter/input validation, 3 bracketing
//! failure, 4 no blow-up within the horizon, 5 data error.

mod commands;
mod config;
mod grid;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Config;
use output::Format;

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<pressctl_core::Error> for CliError {
    fn from(err: pressctl_core::Error) -> Self {
        use pressctl_core::Error::*;
        let code = match &err {
            Parameter(_) | Domain(_) => 2,
            Bracketing { .. } => 3,
            Data(_) | DegenerateInput(_) | Resolution(_) => 5,
            Numeric { .. } | Inconsistency(_) => 1,
        };
        Self { code, message: err.to_string() }
    }
}

#[derive(Parser)]
#[command(name = "pressctl", version, about = "Delayed press-control simulation and analysis")]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format: csv or tsv.
    #[arg(long, global = true)]
    format: Option<Format>,

    /// File of `key=value` lines (# comments) supplying any flag;
    /// explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the nondimensional delayed model; rows (t, u).
    Simulate(SimulateArgs),
    /// Bisect the overshoot threshold g(beta); rows (beta, g, lo, hi, iterations).
    Threshold(ThresholdArgs),
    /// Fit 1 - g = a * beta^-p over a sweep or an input CSV.
    Fit(FitArgs),
    /// Simulate the dimensional press controller; table rows per run.
    Press(PressArgs),
    /// Estimate the finite-time blow-up rate past the threshold.
    Blowup(BlowupArgs),
    /// Estimate the communication delay from paired velocity series.
    Calibrate(CalibrateArgs),
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Control exponent.
    #[arg(long)]
    beta: Option<f64>,
    /// Nondimensional initial velocity.
    #[arg(long)]
    w0: Option<f64>,
    /// Grid steps per delay interval [default: 100].
    #[arg(long = "steps-per-delay")]
    steps_per_delay: Option<usize>,
    /// Integration horizon in delay units (>= 1).
    #[arg(long)]
    horizon: Option<f64>,
}

#[derive(Args)]
pub struct ThresholdArgs {
    /// Single exponent to bisect.
    #[arg(long, conflicts_with = "beta_grid")]
    beta: Option<f64>,
    /// Grid of exponents: "a,b,c", "lo:hi:N", or "lo:hi:Nlog".
    #[arg(long = "beta-grid")]
    beta_grid: Option<String>,
    /// Bisection tolerance on w0 [default: 1e-4].
    #[arg(long)]
    tol: Option<f64>,
    /// Classification horizon in delay units [default: 500].
    #[arg(long)]
    horizon: Option<f64>,
    /// Grid steps per delay interval [default: 200].
    #[arg(long = "steps-per-delay")]
    steps_per_delay: Option<usize>,
}

#[derive(Args)]
pub struct FitArgs {
    /// CSV of (beta, g) points to fit.
    #[arg(long, conflicts_with = "beta_grid")]
    input: Option<PathBuf>,
    /// Compute the points inline over this grid (see threshold).
    #[arg(long = "beta-grid")]
    beta_grid: Option<String>,
    /// Drop points with beta below this [default: 4].
    #[arg(long = "beta-min")]
    beta_min: Option<f64>,
    /// Drop points with beta above this.
    #[arg(long = "beta-max")]
    beta_max: Option<f64>,
    /// Bisection tolerance for inline sweeps [default: 1e-4].
    #[arg(long)]
    tol: Option<f64>,
    /// Classification horizon for inline sweeps [default: 500].
    #[arg(long)]
    horizon: Option<f64>,
    /// Grid steps per delay for inline sweeps [default: 200].
    #[arg(long = "steps-per-delay")]
    steps_per_delay: Option<usize>,
}

#[derive(Args)]
pub struct PressArgs {
    /// Target stroke (length units).
    #[arg(long)]
    ell: Option<f64>,
    /// Communication delay [default: 40].
    #[arg(long)]
    tau: Option<f64>,
    /// Velocity cap [default: 10].
    #[arg(long)]
    vmax: Option<f64>,
    /// Simulation step [default: 0.5].
    #[arg(long)]
    dt: Option<f64>,
    /// Comma-separated exponents for the power-law controller.
    #[arg(long = "beta-list")]
    beta_list: Option<String>,
    /// Which controller(s) to run: 1, 2, or both [default: both].
    #[arg(long)]
    problem: Option<String>,
}

#[derive(Args)]
pub struct BlowupArgs {
    /// Control exponent.
    #[arg(long)]
    beta: Option<f64>,
    /// Nondimensional initial velocity (must exceed the threshold).
    #[arg(long)]
    w0: Option<f64>,
    /// Grid steps per delay interval [default: 4000].
    #[arg(long = "steps-per-delay")]
    steps_per_delay: Option<usize>,
    /// Search horizon in delay units [default: 50].
    #[arg(long)]
    horizon: Option<f64>,
}

#[derive(Args)]
pub struct CalibrateArgs {
    /// Two-column CSV (time, velocity) of the commanded series.
    #[arg(long)]
    commanded: Option<PathBuf>,
    /// Two-column CSV (time, velocity) of the measured series.
    #[arg(long)]
    measured: Option<PathBuf>,
    /// Largest delay to search, in time units.
    #[arg(long = "max-lag")]
    max_lag: Option<f64>,
    /// Time before which samples are untrusted [default: series start].
    #[arg(long = "valid-from")]
    valid_from: Option<f64>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    let format = match cfg.resolve(cli.format, "format")? {
        Some(f) => f,
        None => Format::Csv,
    };
    let rendered = match &cli.command {
        Command::Simulate(args) => commands::simulate(args, &cfg, format)?,
        Command::Threshold(args) => commands::threshold(args, &cfg, format)?,
        Command::Fit(args) => commands::fit(args, &cfg, format)?,
        Command::Press(args) => commands::press(args, &cfg, format)?,
        Command::Blowup(args) => commands::blowup(args, &cfg, format)?,
        Command::Calibrate(args) => commands::calibrate(args, &cfg, format)?,
    };
    let output = match cli.output {
        Some(path) => Some(path),
        None => cfg.resolve::<PathBuf>(None, "output")?,
    };
    match output {
        Some(path) => std::fs::write(&path, rendered)
            .map_err(|e| CliError::new(5, format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| CliError::new(5, format!("cannot write standard output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
