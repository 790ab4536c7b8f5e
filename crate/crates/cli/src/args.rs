//! Command-line configuration.

use crate::grid::{parse_grid, parse_int_grid, parse_scalar, GammaMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Clone, Parser)]
#[command(name = "lfb", version, about = "Linear feedback coding over AWGN channels with noisy feedback")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build one scheme and print it with its diagnostics as JSON.
    BuildScheme(BuildSchemeArgs),
    /// Tabulate proposed, S-K and bound SNRs over parameter grids.
    SweepSnr(SweepSnrArgs),
    /// Tabulate the optimal power split gamma0 over parameter grids.
    GammaSweep(GammaSweepArgs),
    /// Tabulate open-loop and feedback error-exponent bounds over rates.
    ExponentBounds(ExponentArgs),
    /// Monte Carlo A/B of an outer code on the open-loop channel and over
    /// the feedback superchannel at equal energy per information bit.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeChoice {
    /// Geometric scheme with `beta = beta0(gamma)`.
    Proposed,
    /// Schalkwijk-Kailath scheme.
    Sk,
    /// Alternating optimization from the uniform combiner.
    Optimized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateUnits {
    Nats,
    Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecisionArg {
    Soft,
    Hard,
}

/// Outer code selected by name: `identity`, `repetition:<r>` or `hamming74`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterChoice {
    Identity,
    Repetition(usize),
    Hamming74,
}

impl std::str::FromStr for OuterChoice {
    type Err = crate::CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        match t.split_once(':') {
            None if t == "identity" => Ok(OuterChoice::Identity),
            None if t == "hamming74" => Ok(OuterChoice::Hamming74),
            Some(("repetition", r)) => r
                .parse()
                .ok()
                .filter(|r| *r >= 1)
                .map(OuterChoice::Repetition)
                .ok_or_else(|| crate::CliError::Config(format!("bad repetition factor '{r}'"))),
            _ => Err(crate::CliError::Config(format!(
                "outer code must be identity, repetition:<r> or hamming74, got '{s}'"
            ))),
        }
    }
}

fn gamma_mode(s: &str) -> Result<GammaMode, crate::CliError> {
    s.parse()
}

fn outer_choice(s: &str) -> Result<OuterChoice, crate::CliError> {
    s.parse()
}

/// Where and how results are written.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (each command has its own default).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct BuildSchemeArgs {
    /// Channel uses per message.
    #[arg(long = "N")]
    pub n: usize,
    /// Per-use power constraint (linear, or with a dB suffix).
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub rho: f64,
    /// Feedback noise variance.
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub sigma2: f64,
    /// Power split: a value in [0, 1] or sk|optimal|asymptotic|exact.
    /// Defaults to optimal, or sk for the S-K scheme.
    #[arg(long, value_parser = gamma_mode)]
    pub gamma: Option<GammaMode>,
    #[arg(long, value_enum, default_value = "proposed")]
    pub scheme: SchemeChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepSnrArgs {
    /// Blocklength grid, e.g. `3,10` or `2:12`.
    #[arg(long = "N", value_parser = parse_int_grid)]
    pub n: ::std::vec::Vec<usize>,
    /// Power grid, e.g. `0.5:4:8` or `0:10:11dB`.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub rho: ::std::vec::Vec<f64>,
    /// Feedback noise grid.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub sigma2: ::std::vec::Vec<f64>,
    /// Power split of the proposed scheme; the S-K scheme always uses (N-1)/N.
    #[arg(long, value_parser = gamma_mode, default_value = "optimal")]
    pub gamma: GammaMode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GammaSweepArgs {
    #[arg(long = "N", value_parser = parse_int_grid)]
    pub n: ::std::vec::Vec<usize>,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub rho: ::std::vec::Vec<f64>,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub sigma2: ::std::vec::Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExponentArgs {
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub rho: f64,
    /// Feedback noise variance, strictly positive.
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub sigma2: f64,
    /// Rate grid; 200 points on [0, C] when absent.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub rates: Option<::std::vec::Vec<f64>>,
    /// Units of `--rates`; output is always in nats with a bits column.
    #[arg(long, value_enum, default_value = "nats")]
    pub rate_units: RateUnits,
    /// Largest inner blocklength searched.
    #[arg(long, default_value_t = lfb_core::exponent::DEFAULT_N_MAX)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Inner channel uses per outer symbol.
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
    /// Open-loop symbol energy grid; the inner scheme gets rho/N per use.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub rho: ::std::vec::Vec<f64>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub sigma2: f64,
    #[arg(long, value_parser = gamma_mode, default_value = "exact")]
    pub gamma: GammaMode,
    #[arg(long, value_parser = outer_choice, default_value = "repetition:3")]
    pub outer: OuterChoice,
    /// PAM alphabet size.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, value_enum, default_value = "soft")]
    pub decision: DecisionArg,
    /// Information bits per grid point.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::BuildScheme(a) => &a.output,
            Command::SweepSnr(a) => &a.output,
            Command::GammaSweep(a) => &a.output,
            Command::ExponentBounds(a) => &a.output,
            Command::Simulate(a) => &a.output,
        }
    }
}
