#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Classify(a) => commands::classify(a),
        Command::Scan(a) => commands::scan(a),
        Command::Critical(a) => commands::critical(a),
        Command::CheckCompat(a) => commands::check_compat(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
