//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "strongconverse",
    version,
    about = "Rényi divergences, channel capacities and feedback protocols"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoder {
    Pgm,
    Helstrom,
    Basis,
    Given,
    Best,
}

/// Options shared by every command.
#[derive(Clone, Debug, Args, Serialize)]
pub struct Common {
    /// Master seed (positive).
    #[arg(long, default_value_t = 42, value_parser = clap::value_parser!(u64).range(1..))]
    pub seed: u64,
    /// Optimizer restarts (positive).
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Report path; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Sandwiched Rényi divergence D̃_α(ρ‖σ), or the relative entropy when no
    /// order is given.
    Divergence {
        /// State file or shorthand (`mixed:d`, `basis:d,i`).
        #[arg(long)]
        rho: String,
        #[arg(long)]
        sigma: String,
        /// Order α ∈ (0,1) ∪ (1,∞).
        #[arg(long, conflicts_with = "grid")]
        #[serde(skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        /// Comma-separated list of orders.
        #[arg(long, value_delimiter = ',')]
        #[serde(skip_serializing_if = "Option::is_none")]
        grid: Option<Vec<f64>>,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Holevo information and information radius, or their α-versions.
    Capacity {
        /// Channel file or shorthand such as `depolarizing:0.25`.
        #[arg(long)]
        channel: String,
        /// Order α > 1.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Strong-converse exponent E(R) = sup_α ((α−1)/α)(R − χ̃_α).
    Exponent {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        rate: f64,
        /// Evaluate exactly these orders (no refinement or extension).
        #[arg(long, value_delimiter = ',')]
        #[serde(skip_serializing_if = "Option::is_none")]
        grid: Option<Vec<f64>>,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Entanglement-breaking test of the Choi state and the PPT boundary.
    EbCheck {
        #[arg(long)]
        channel: String,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Simulates a feedback protocol and checks the success bound, the
    /// separability invariant and the mutual-information chain.
    Simulate {
        #[arg(long)]
        channel: String,
        /// Protocol JSON; a seeded random protocol when absent.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        protocol: Option<PathBuf>,
        /// Rounds of the random protocol.
        #[arg(long, default_value_t = 2, conflicts_with = "protocol")]
        rounds: usize,
        /// Messages of the random protocol.
        #[arg(long, default_value_t = 2, conflicts_with = "protocol")]
        messages: usize,
        #[arg(long, value_enum, default_value_t = Decoder::Best)]
        decoder: Decoder,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Runs a seeded verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Divergence { .. } => "divergence",
            Command::Capacity { .. } => "capacity",
            Command::Exponent { .. } => "exponent",
            Command::EbCheck { .. } => "eb-check",
            Command::Simulate { .. } => "simulate",
            Command::Verify { .. } => "verify",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Divergence { common, .. }
            | Command::Capacity { common, .. }
            | Command::Exponent { common, .. }
            | Command::EbCheck { common, .. }
            | Command::Simulate { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}
