use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::Format;

#[derive(Debug, Parser)]
#[command(name = "qmeasure", version, about = "Sample random-state ensembles and check them against their analytic laws")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw states and write one record per sample.
    Sample(SampleArgs),
    /// Average entanglement entropy, closed form against Monte Carlo.
    EntropyScan(ScanArgs),
    /// Goodness-of-fit test of an ensemble against a registered law.
    Compare(CompareArgs),
    /// Bures line element, direct against the eigenbasis quadratic form.
    MetricCheck(MetricArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed (falls back to QMEASURE_DEFAULT_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file; stdout when absent or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    /// `induced:M,N`, `bures-qubit`, `hs-qubit` or `simplex:M:KIND`.
    #[arg(long)]
    pub ensemble: Option<String>,
    /// Number of samples.
    #[arg(long = "n")]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    /// System dimension.
    #[arg(long)]
    pub m: Option<usize>,
    /// Ancilla dimensions, e.g. `2..10` or `2,5,100`.
    #[arg(long)]
    pub ancilla: Option<String>,
    /// Samples per row.
    #[arg(long = "n")]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ensemble to sample, same syntax as for `sample`.
    #[arg(long)]
    pub ensemble: Option<String>,
    /// `radial:uniform-ball`, `radial:bures`, `radial:induced=N`, or
    /// `spectrum:{bures,hs,flat,induced=N}`.
    #[arg(long)]
    pub density: Option<String>,
    /// Number of samples.
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Bins per axis for spectrum tests.
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Matrix dimension (2 to 6).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Perturbation size.
    #[arg(long)]
    pub scale: Option<f64>,
}
