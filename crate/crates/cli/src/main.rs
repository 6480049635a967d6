//! `perc`: reproducible percolation experiments.

mod args;
mod commands;
mod reproduce;
mod sink;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit statuses.
pub mod status {
    pub const OK: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const AMBIGUOUS: u8 = 3;
    pub const BUDGET: u8 = 4;
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: status::USAGE,
            message: message.into(),
        }
    }

    pub fn ambiguous(message: impl Into<String>) -> Self {
        Failure {
            code: status::AMBIGUOUS,
            message: message.into(),
        }
    }

    pub fn failed(message: impl Into<String>) -> Self {
        Failure {
            code: status::FAILURE,
            message: message.into(),
        }
    }
}

impl From<perc_core::Error> for Failure {
    fn from(e: perc_core::Error) -> Self {
        use perc_core::Error;
        let code = match e {
            Error::InvalidParameter(_) | Error::Parse { .. } => status::USAGE,
            Error::BudgetExceeded { .. } | Error::EnumerationBound { .. } => status::BUDGET,
            Error::InvalidBracket(_) => status::AMBIGUOUS,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::failed(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Exact(a) => commands::exact(&cli.common, a),
        Command::Tauc(a) => commands::tauc(&cli.common, a),
        Command::Dustpipe(a) => commands::dustpipe(&cli.common, a),
        Command::Triangle(a) => commands::triangle(&cli.common, a),
        Command::Counterexample(a) => commands::counterexample(&cli.common, a),
        Command::ReproducePaper(a) => reproduce::run(&cli.common, a),
    };
    match result {
        Ok(()) => ExitCode::from(status::OK),
        Err(f) => {
            eprintln!("perc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
