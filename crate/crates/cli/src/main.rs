//! `willmore`: batch runs of the loop-group construction.
//!
//! Exit status: 0 when every checked residual is within tolerance, 1 when a
//! check failed (the report is still written), 2 on errors, which are printed
//! as a one-line JSON object `{"error": kind, "message": ...}` on stdout.

mod args;
mod commands;
mod config;
mod error;

use clap::Parser;
use std::process::ExitCode;

use args::{Cli, Command};
use commands::Outcome;

fn run(cli: Cli) -> error::Result<Outcome> {
    match cli.command {
        Command::Generate { common, grid, reference, sequential } => {
            commands::generate(&common, &grid, reference, sequential)
        }
        Command::VerifySymmetry { common, gamma, transform, base, samples } => {
            commands::verify_symmetry(&common, gamma.as_deref(), transform.as_deref(), base, samples)
        }
        Command::Monodromy { common, gamma, shifts, anchor, base } => {
            commands::monodromy(&common, gamma.as_deref(), &shifts, anchor, base)
        }
        Command::Closing { common, loop_path, shift, samples } => {
            commands::closing(&common, loop_path.as_deref(), shift, samples)
        }
        Command::Factor { common, loop_path, split } => commands::factor(&common, &loop_path, split),
        Command::Energy { common, grid, expect } => commands::energy(&common, grid.as_deref(), expect),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            commands::print(&e.to_json());
            ExitCode::from(2)
        }
    }
}
