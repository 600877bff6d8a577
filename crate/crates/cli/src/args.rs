//! Command-line arguments. Every subcommand's arguments double as its
//! serialized run configuration, so a replay parses exactly what was run.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fbn_probe::CouplingPower;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "fbn-probe",
    version,
    about = "Qubit probes of fractional Brownian noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; standard output when omitted.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn q_power_parser() -> clap::builder::RangedI64ValueParser<u8> {
    clap::value_parser!(u8).range(1..=2)
}

pub fn coupling_power(q: u8) -> CouplingPower {
    if q == 2 {
        CouplingPower::Quadratic
    } else {
        CouplingPower::Linear
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Bures metric and QFI over a (γ, t) grid at fixed coupling.
    QfiMap(QfiMapArgs),
    /// Time-optimized Bures metric at random (γ, λ).
    QfiOpt(QfiOptArgs),
    /// Time-optimized Helstrom error over a γ₁ × γ₂ grid.
    Helstrom(HelstromArgs),
    /// Time-optimized quantum Chernoff bound along a coupling grid.
    Chernoff(ChernoffArgs),
    /// Threshold coupling minimizing the optimized Bures metric.
    Threshold(ThresholdArgs),
    /// Monte Carlo check of the analytic visibility.
    McValidate(McValidateArgs),
    /// Simulated x-basis experiments and maximum-likelihood estimation of γ.
    Estimate(EstimateArgs),
    /// Re-run the configuration embedded in a previous output file.
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct QfiMapArgs {
    #[arg(long, default_value_t = 1.001)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 1.999)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Lower end of the time window; automatic when omitted.
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Grid points along γ (and along t unless --t-resolution is given).
    #[arg(long, default_value_t = 101)]
    pub resolution: usize,
    #[arg(long)]
    pub t_resolution: Option<usize>,
    #[arg(long = "q-power", default_value_t = 1, value_parser = q_power_parser())]
    pub q_power: u8,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct QfiOptArgs {
    #[arg(long, default_value_t = 5000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long = "q-power", default_value_t = 1, value_parser = q_power_parser())]
    pub q_power: u8,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct HelstromArgs {
    /// Comma-separated γ₁ values; a uniform grid when omitted.
    #[arg(long, value_delimiter = ',')]
    pub gamma1: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub gamma2: Vec<f64>,
    #[arg(long, default_value_t = 1.001)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 1.999)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 21)]
    pub resolution: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3])]
    pub lambda: Vec<f64>,
    #[arg(long = "q-power", default_value_t = 1, value_parser = q_power_parser())]
    pub q_power: u8,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ChernoffArgs {
    /// First members of the pairs, matched by position with --gamma2.
    #[arg(long, value_delimiter = ',', default_values_t = [1.2, 1.4])]
    pub gamma1: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1.4, 1.6])]
    pub gamma2: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 61)]
    pub resolution: usize,
    /// Number of copies n for the ½Qⁿ column.
    #[arg(long, default_value_t = 10)]
    pub copies: u32,
    #[arg(long = "q-power", default_value_t = 1, value_parser = q_power_parser())]
    pub q_power: u8,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ThresholdArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1.4, 1.6])]
    pub gamma: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 25)]
    pub resolution: usize,
    #[arg(long = "q-power", default_value_t = 1, value_parser = q_power_parser())]
    pub q_power: u8,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct McValidateArgs {
    #[arg(long, default_value_t = 1.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub time: f64,
    #[arg(long = "q-power", default_value_t = 2, value_parser = q_power_parser())]
    pub q_power: u8,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 512)]
    pub steps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EstimateArgs {
    #[arg(long, default_value_t = 1.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Measurement time; the optimal time τ_B when omitted.
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 5000)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long = "q-power", default_value_t = 1, value_parser = q_power_parser())]
    pub q_power: u8,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ReplayArgs {
    /// CSV or JSON file written by an earlier run.
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Command {
    pub fn output(&self) -> Option<&OutputArgs> {
        match self {
            Command::QfiMap(a) => Some(&a.output),
            Command::QfiOpt(a) => Some(&a.output),
            Command::Helstrom(a) => Some(&a.output),
            Command::Chernoff(a) => Some(&a.output),
            Command::Threshold(a) => Some(&a.output),
            Command::McValidate(a) => Some(&a.output),
            Command::Estimate(a) => Some(&a.output),
            Command::Replay(_) => None,
        }
    }

    pub fn output_mut(&mut self) -> Option<&mut OutputArgs> {
        match self {
            Command::QfiMap(a) => Some(&mut a.output),
            Command::QfiOpt(a) => Some(&mut a.output),
            Command::Helstrom(a) => Some(&mut a.output),
            Command::Chernoff(a) => Some(&mut a.output),
            Command::Threshold(a) => Some(&mut a.output),
            Command::McValidate(a) => Some(&mut a.output),
            Command::Estimate(a) => Some(&mut a.output),
            Command::Replay(_) => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::QfiMap(_) => "qfi-map",
            Command::QfiOpt(_) => "qfi-opt",
            Command::Helstrom(_) => "helstrom",
            Command::Chernoff(_) => "chernoff",
            Command::Threshold(_) => "threshold",
            Command::McValidate(_) => "mc-validate",
            Command::Estimate(_) => "estimate",
            Command::Replay(_) => "replay",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::QfiOpt(a) => Some(a.seed),
            Command::McValidate(a) => Some(a.seed),
            Command::Estimate(a) => Some(a.seed),
            _ => None,
        }
    }
}
