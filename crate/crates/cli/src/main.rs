//! `pqft`: figure tables, protocol simulation, timeline inspection and the
//! self-check suites.
//!
//! Exit status is 0 on success, 1 when a validation finds a violation and 2
//! on invalid input.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pqft_core::params::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "pqft",
    version,
    about = "Photonic quantum Fourier transform toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Controlled phase against Stark shift, with the solved CR_k marks.
    PhaseCurve(config::PhaseCurveArgs),
    /// Success-probability bound against photon number.
    Success(config::SuccessArgs),
    /// Run the circuit on one input, optionally with noise.
    Simulate(config::SimulateArgs),
    /// Dump and check the delay-loop event schedule.
    Timeline(config::TimelineArgs),
    /// Run every self-check suite.
    Validate(config::ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Seed for every random choice.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Violation(String),
}

impl From<pqft_core::Error> for Failure {
    fn from(e: pqft_core::Error) -> Self {
        match e {
            pqft_core::Error::BoundViolation { .. } => Failure::Violation(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::PhaseCurve(a) => commands::cmd_phase_curve(a),
        Command::Success(a) => commands::cmd_success(a),
        Command::Simulate(a) => commands::cmd_simulate(a),
        Command::Timeline(a) => commands::cmd_timeline(a),
        Command::Validate(a) => commands::cmd_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
