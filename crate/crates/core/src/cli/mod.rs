//! Command-line front end: `run`, `preset` and `verify`.
//!
//! Exit status is 0 when every check passes, 1 when a check fails or the
//! computation stops with an error, and 2 for configuration errors.

pub mod config;
pub mod expr;
pub mod output;
pub mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::Error;

pub use config::{preset, GridSpec, Model, Output, RunConfig, PRESETS};
pub use pipeline::{execute, Check, RunReport};

#[derive(Debug, Parser)]
#[command(name = "ermakov-susy", version, about = "Complex supersymmetric partners from Ermakov superpotentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the pipeline for a config file and write CSV outputs.
    Run {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a built-in preset, or print its config with --emit-config.
    Preset {
        name: String,
        #[arg(long)]
        emit_config: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the checks for a config file without writing data.
    Verify { config: PathBuf },
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::ConstraintInfeasible { .. } | Error::ConstraintViolated { .. } => EXIT_CONFIG,
        _ => EXIT_CHECK_FAILED,
    }
}

fn report_exit(r: &RunReport) -> u8 {
    if r.passed() {
        EXIT_OK
    } else {
        for c in r.failed() {
            eprintln!("check failed: {} = {:e} (tolerance {:e})", c.name, c.value, c.tolerance);
        }
        EXIT_CHECK_FAILED
    }
}

fn run_and_write(cfg: &RunConfig, out_dir: &std::path::Path) -> Result<u8, Error> {
    let report = execute(cfg)?;
    output::write_outputs(&report, out_dir)?;
    print!("{}", output::summary(&report));
    Ok(report_exit(&report))
}

/// Dispatches a parsed command line and returns the process exit status.
pub fn dispatch(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Run { config, out_dir } => RunConfig::load(&config).and_then(|c| run_and_write(&c, &out_dir)),
        Command::Preset { name, emit_config, out_dir } => preset(&name).and_then(|c| {
            if emit_config {
                print!("{}", c.to_toml()?);
                Ok(EXIT_OK)
            } else {
                run_and_write(&c, &out_dir)
            }
        }),
        Command::Verify { config } => RunConfig::load(&config).and_then(|c| {
            let report = execute(&c)?;
            print!("{}", output::summary(&report));
            Ok(report_exit(&report))
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ermakov-susy: {e}");
            exit_for(&e)
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(dispatch(Cli::parse()))
}
