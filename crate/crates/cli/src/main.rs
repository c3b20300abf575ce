//! `fthbi`: tables, profile curves, exponent calibration and M-Wright values.
//!
//! Exit status: 0 on success, 2 for configuration or I/O problems, 3 when a
//! numerical routine fails.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Flags, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numeric(fthbi::Error),
    #[error("calibration failed for {0}")]
    Calibration(String),
}

impl From<fthbi::Error> for CliError {
    fn from(e: fthbi::Error) -> Self {
        use fthbi::Error::*;
        match e {
            InvalidOrder(_) | InvalidExponent(_) | InvalidParameter(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) | CliError::Calibration(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fthbi", version, about = "Fractional-time heat-balance integral approximations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regenerate table 1 (calibrated exponents), 2 (drift, μ = 1/2) or 3 (drift, μ = 1/3)
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Replace Γ(2-μ) in the drift front factor (table 3 only)
        #[arg(long)]
        front_gamma: Option<f64>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Profile curves over η, x at fixed t, or t at fixed x
    Profile {
        #[command(flatten)]
        flags: Flags,
    },
    /// Exponent calibration and error reports
    Calibrate {
        #[command(flatten)]
        flags: Flags,
    },
    /// Evaluate the M-Wright function M_ν(z) on a grid
    Mwright {
        #[command(flatten)]
        flags: Flags,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, flags) = match &cli.command {
        Command::Table { flags, .. } => ("table", flags),
        Command::Profile { flags } => ("profile", flags),
        Command::Calibrate { flags } => ("calibrate", flags),
        Command::Mwright { flags } => ("mwright", flags),
    };
    let cfg = RunConfig::load(name, flags)?;
    let output = match &cli.command {
        Command::Table { which, front_gamma, .. } => commands::table(*which, *front_gamma, &cfg)?,
        Command::Profile { .. } => commands::profile(&cfg)?,
        Command::Calibrate { .. } => commands::calibrate(&cfg)?,
        Command::Mwright { .. } => commands::mwright_values(&cfg)?,
    };
    match &cfg.output_path {
        Some(path) => {
            std::fs::write(path, &output.text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        }
        None => std::io::stdout().lock().write_all(output.text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    match output.failure {
        // The report is still written; the status reflects the failure.
        Some(msg) => Err(CliError::Calibration(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fthbi: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
