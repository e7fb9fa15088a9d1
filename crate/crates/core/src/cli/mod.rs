//! `conectl`: JSON config in, JSON report out.
//!
//! Exit codes: 0 success or feasible, 2 usage or config error, 3 negative
//! analysis (infeasible, counterexample found, trajectory exited), 4 numeric
//! failure.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::debug;

use crate::error::Error;

pub use config::{ConeSpec, Options, ProblemConfig, ScanRange, SCHEMA_VERSION};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("report contains a non-finite value at {0}")]
    NonFinite(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::NonFinite(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "conectl",
    version,
    about = "Dikin-based Lorenz cones: construction, spectra, invariance"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Problem configuration (JSON).
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Integration step h.
    #[arg(long)]
    pub step: Option<f64>,
    /// Integration horizon T.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Add a table of λ_max(S(a)) over the configured grid.
    #[arg(long)]
    pub scan: bool,
    /// Report path; for `mesh`, the stem of the .obj and .csv files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Mesh resolution per parameter.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Cone matrix, condition residuals, vertex and axis.
    Construct(CommonArgs),
    /// Eigenvalues, inertia, determinants and λ₁ bounds.
    Spectrum(CommonArgs),
    /// Search for a with QA + AᵀQ + aQ ⪯ 0.
    Certify(CommonArgs),
    /// Sample the boundary for ⟨Ax, Qx⟩ > 0.
    Falsify(CommonArgs),
    /// Integrate trajectories from members of the cone.
    Simulate(CommonArgs),
    /// Affine map onto the standard cone.
    Standardize(CommonArgs),
    /// OBJ and CSV surfaces of the cone and its ellipsoid (n = 3).
    Mesh(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Construct(_) => "construct",
            Command::Spectrum(_) => "spectrum",
            Command::Certify(_) => "certify",
            Command::Falsify(_) => "falsify",
            Command::Simulate(_) => "simulate",
            Command::Standardize(_) => "standardize",
            Command::Mesh(_) => "mesh",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Construct(a)
            | Command::Spectrum(a)
            | Command::Certify(a)
            | Command::Falsify(a)
            | Command::Simulate(a)
            | Command::Standardize(a)
            | Command::Mesh(a) => a,
        }
    }
}

fn apply_overrides(config: &mut ProblemConfig, args: &CommonArgs) {
    let o = &mut config.options;
    if let Some(v) = args.seed {
        o.seed = v;
    }
    if let Some(v) = args.samples {
        o.samples = v;
    }
    if let Some(v) = args.step {
        o.step = v;
    }
    if let Some(v) = args.horizon {
        o.horizon = v;
    }
    if args.tol.is_some() {
        o.tol = args.tol;
    }
    if let Some(v) = args.resolution {
        o.resolution = v;
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match try_run(cli) {
        Ok(code) => code,
        Err(e) => {
            debug!("failing with exit code {}", e.exit_code());
            eprintln!("conectl: {e}");
            e.exit_code()
        }
    }
}

fn try_run(cli: Cli) -> Result<i32, CliError> {
    let command = cli.command;
    let args = command.args().clone();
    let mut config = ProblemConfig::load(&args.config)?;
    apply_overrides(&mut config, &args);
    config.validate()?;
    let is_mesh = matches!(command, Command::Mesh(_));
    let outcome = commands::execute(
        command,
        config,
        args.scan,
        args.out.as_deref(),
        args.timings,
    )?;
    let json = outcome.report.to_json().map_err(CliError::NonFinite)?;
    match (&args.out, is_mesh) {
        (Some(path), false) => std::fs::write(path, format!("{json}\n"))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        _ => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{json}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(CliError::Io(format!("stdout: {e}")));
                }
                _ => {}
            }
        }
    }
    Ok(if outcome.negative {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    })
}

/// Parses `args` (including the program name) and runs; usage errors exit 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
