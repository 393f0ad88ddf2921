//! `tegad` — graph-based anomaly detection for univariate time series.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

mod commands;
mod config;
mod error;
mod results;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{BuildArgs, DetectArgs, ReportArgs, SweepArgs};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "tegad",
    version,
    about = "Time-evolving-graph anomaly detection for univariate time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a detector on a training series and save the model.
    Build(BuildArgs),
    /// Run a saved model over a testing series and record the outcome.
    Detect(DetectArgs),
    /// Evaluate many metric/parameter combinations in one run.
    Sweep(SweepArgs),
    /// Summarize a results file: timings, accuracy, plot-ready tables.
    Report(ReportArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(args) => commands::cmd_build(args),
        Command::Detect(args) => commands::cmd_detect(args),
        Command::Sweep(args) => commands::cmd_sweep(args),
        Command::Report(args) => commands::cmd_report(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are successes; everything else is a
            // usage error (exit code 1, not clap's default 2 — 2 is
            // reserved for data errors here).
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
