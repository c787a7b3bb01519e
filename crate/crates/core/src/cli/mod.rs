//! Command-line front end.
//!
//! Each subcommand reads a JSON [`RunConfig`], evaluates its rows (possibly
//! in parallel), and writes one CSV table in input order. Diagnostics go to
//! standard error.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical tolerance
//! violation or failed row, 3 I/O error.

pub mod commands;
pub mod config;
mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::identity::DEFAULT_TOL;
use crate::units::UnitSystem;

pub use config::RunConfig;
pub use table::{format_float, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("numerical tolerance violated: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "slabgreen",
    version,
    about = "Lossy-slab Green functions, Green-identity boundary terms and decay rates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// CSV destination (default: config output.path, else stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Absolute quadrature tolerance (default: config tolerances.quadrature, else 1e-8).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Add quadrature cross-check columns (decay-scan).
    #[arg(long)]
    pub oracle: bool,
    /// Unit system; overrides the config "units" key.
    #[arg(long, value_enum)]
    pub units: Option<UnitsArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    Natural,
    Si,
}

impl From<UnitsArg> for UnitSystem {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Natural => UnitSystem::Natural,
            UnitsArg::Si => UnitSystem::Si,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    Position,
    Thickness,
    Frequency,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Slab amplitudes A, B, C, D, Y and the absorbed fraction per frequency.
    Coefficients(CommonArgs),
    /// Both sides of the Green identity over a grid of source pairs.
    VerifyIdentity(CommonArgs),
    /// Corrected and uncorrected decay rates along one swept axis.
    DecayScan {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        sweep: SweepAxis,
    },
    /// Rates and boundary term along a permittivity path towards 1.
    LimitStudy(CommonArgs),
    /// Free-space dyadic Green tensor, its coincident imaginary part and Γ₀.
    Tensor3d(CommonArgs),
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Coefficients(c)
            | Command::VerifyIdentity(c)
            | Command::LimitStudy(c)
            | Command::Tensor3d(c) => c,
            Command::DecayScan { common, .. } => common,
        }
    }
}

/// Resolved settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Session {
    pub config: RunConfig,
    pub units: UnitSystem,
    pub tol: f64,
    pub oracle: bool,
}

impl Session {
    pub fn new(config: RunConfig, args: &CommonArgs) -> Result<Self, CliError> {
        let units = args
            .units
            .map(UnitSystem::from)
            .or(config.units)
            .unwrap_or_default();
        let tol = args
            .tol
            .or(config.tolerances.quadrature)
            .unwrap_or(DEFAULT_TOL);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Validation(format!(
                "tolerances.quadrature / --tol: must be finite and > 0, got {tol}"
            )));
        }
        Ok(Self {
            config,
            units,
            tol,
            oracle: args.oracle,
        })
    }
}

/// Result of one subcommand before it is written out.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<String>,
    /// Rows that failed or violated their tolerance.
    pub violations: usize,
}

pub fn execute(command: &Command, session: &Session) -> Result<Outcome, CliError> {
    match command {
        Command::Coefficients(_) => commands::coefficients(session),
        Command::VerifyIdentity(_) => commands::verify_identity(session),
        Command::DecayScan { sweep, .. } => commands::decay_scan(session, *sweep),
        Command::LimitStudy(_) => commands::limit_study(session),
        Command::Tensor3d(_) => commands::tensor3d(session),
    }
}

fn run_parsed(cli: &Cli) -> Result<(), CliError> {
    let common = cli.command.common();
    let config = RunConfig::load(&common.config)?;
    let destination = common
        .out
        .clone()
        .or_else(|| config.output.as_ref().and_then(|o| o.path.clone()));
    let session = Session::new(config, common)?;
    let outcome = execute(&cli.command, &session)?;

    let bytes = outcome.table.to_csv()?;
    match destination {
        Some(path) => std::fs::write(&path, &bytes)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    if outcome.violations > 0 {
        return Err(CliError::Numerical(format!(
            "{} row(s) failed or exceeded tolerance",
            outcome.violations
        )));
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_parsed(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("slabgreen: {e}");
            e.exit_code()
        }
    }
}
