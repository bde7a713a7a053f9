//! `covtime`: builds covariant time observables, dilates them, checks the
//! time-energy bounds, and certifies the Airy constant.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 on usage or configuration errors.

mod bounds;
mod certify;
mod config;
mod dilate;
mod fixtures;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};
use output::{CliError, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::AiryCertify(args) => certify::run(&cli.common, args),
        Command::Dilate(args) => dilate::run(&cli.common, args),
        Command::Bounds(args) => bounds::run(&cli.common, args),
        Command::EmitFixtures => fixtures::run(&cli.common),
    };
    finish(result, &cli)
}

fn finish(result: Result<Outcome, CliError>, cli: &Cli) -> ExitCode {
    match result {
        Ok(outcome) => {
            let text = outcome.text();
            print!("{text}");
            if let (Some(path), true) = (&cli.common.out, cli.command.writes_report()) {
                if let Err(e) = output::write_atomic(path, text.as_bytes()) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            for note in &outcome.notes {
                eprintln!("{note}");
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
