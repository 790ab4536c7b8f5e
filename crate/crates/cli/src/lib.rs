//! Command-line front end: builds schemes, sweeps SNRs and power splits,
//! tabulates error-exponent bounds and runs Monte Carlo A/B comparisons,
//! writing CSV or JSON data files.
//!
//! Every command is a pure function of its arguments (including `--seed`),
//! so reruns produce byte-identical files.

pub mod args;
pub mod commands;
pub mod grid;
pub mod output;

mod error;

pub use args::{Cli, Command};
pub use error::CliError;

use std::io::Write;

/// Runs a command and returns the text it would write.
pub fn render(command: &Command) -> Result<String, CliError> {
    match command {
        Command::BuildScheme(a) => commands::build_scheme(a),
        Command::SweepSnr(a) => commands::sweep_snr(a),
        Command::GammaSweep(a) => commands::gamma_sweep(a),
        Command::ExponentBounds(a) => commands::exponent_bounds(a),
        Command::Simulate(a) => commands::simulate(a),
    }
}

/// Runs a command and writes its output to `--out`, or to standard output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = render(&cli.command)?;
    match &cli.command.output().out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
