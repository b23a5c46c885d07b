//! `capwedge`: steady capillary surfaces of a fluid resting in a wedge.

mod commands;
mod config;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, Layer, RunConfig, SweepSpec};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Validation(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Validation(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<capillary_wedge::Error> for CliError {
    fn from(e: capillary_wedge::Error) -> Self {
        match e {
            e if e.is_input_error() => CliError::Input(e.to_string()),
            e @ capillary_wedge::Error::ValidationFailure(_) => CliError::Validation(e.to_string()),
            e => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "capwedge", version, about = "Steady gravity-capillary surfaces in a two-wall wedge")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for every steady state with the prescribed volume.
    Solve {
        #[command(flatten)]
        common: Common,
        /// CSV output in polar form (theta,rho,x,y).
        #[arg(long)]
        polar: bool,
        /// Solution index written in CSV output (default: the principal one).
        #[arg(long)]
        state: Option<usize>,
    },
    /// Tabulate the family volume along its shooting parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// u_m (opposite-sign slopes), psi_m or u1 (same-sign slopes).
        #[arg(long)]
        axis: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        from: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
    },
    /// Recompute the residuals of a stored solution file.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Volume thresholds of the two same-sign branches.
    Thresholds {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON file with any of the flag values; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Jump of the adhesion coefficient.
    #[arg(long = "gamma-jump", allow_negative_numbers = true)]
    gamma_jump: Option<f64>,
    /// Inclination of the left wall.
    #[arg(long, allow_negative_numbers = true)]
    theta1: Option<f64>,
    /// Inclination of the right wall.
    #[arg(long, allow_negative_numbers = true)]
    theta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    volume: Option<f64>,
    /// Points per output curve.
    #[arg(long)]
    samples: Option<usize>,
    /// Absolute quadrature tolerance.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Wall angles are given in degrees.
    #[arg(long)]
    degrees: bool,
}

impl Common {
    fn layer(&self) -> Result<Layer, CliError> {
        let file = match &self.config {
            Some(path) => Layer::from_file(path)?,
            None => Layer::default(),
        };
        let flags = Layer {
            g: self.g,
            sigma: self.sigma,
            gamma_jump: self.gamma_jump,
            theta1: self.theta1,
            theta2: self.theta2,
            volume: self.volume,
            samples: self.samples,
            tol: self.tol,
            out: self.out.clone(),
            format: self.format,
            degrees: self.degrees.then_some(true),
            sweep: None,
        };
        Ok(file.overlay(&flags))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { common, polar, state } => commands::solve(&RunConfig::resolve(&common.layer()?, true)?, polar, state),
        Command::Sweep { common, axis, from, to, count, log } => {
            let flags = Layer { sweep: Some(SweepSpec { axis, from, to, count, log: log.then_some(true) }), ..Layer::default() };
            commands::sweep(&RunConfig::resolve(&common.layer()?.overlay(&flags), false)?)
        }
        Command::Validate { file, common } => {
            let (stored, states) = commands::read_stored(&file)?;
            let mut user = common.layer()?;
            if user.degrees.unwrap_or(false) {
                user.theta1 = user.theta1.map(f64::to_radians);
                user.theta2 = user.theta2.map(f64::to_radians);
                user.degrees = Some(false);
            }
            let base = Layer {
                g: Some(stored.g),
                sigma: Some(stored.sigma),
                gamma_jump: Some(stored.gamma_jump),
                theta1: Some(stored.theta1),
                theta2: Some(stored.theta2),
                volume: Some(stored.volume),
                ..Layer::default()
            };
            commands::validate(&RunConfig::resolve(&base.overlay(&user), true)?, &states)
        }
        Command::Thresholds { common } => commands::thresholds(&RunConfig::resolve(&common.layer()?, false)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
