//! `ppl`: batch front end. Exit status 0 on success, 2 on usage errors,
//! 1 on computation errors.

mod args;
mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(ppl_core::Error),
    Io(io::Error),
    Output(String),
}

impl From<ppl_core::Error> for CliError {
    fn from(e: ppl_core::Error) -> Self {
        match e {
            ppl_core::Error::Parse(m) => CliError::Usage(m),
            ppl_core::Error::UnknownFunction(_) => CliError::Usage(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

/// Caps the worker pool at `PPL_THREADS` when set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PPL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage(format!("PPL_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Output(e.to_string()))
}

fn real_main() -> Result<(), CliError> {
    let cli = Cli::parse();
    configure_threads()?;
    let out = commands::run(cli.command)?;
    match &cli.out {
        Some(path) => output::write(&out, cli.format, BufWriter::new(File::create(path)?)),
        None => output::write(&out, cli.format, io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `ppl --help` for usage.");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Output(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
