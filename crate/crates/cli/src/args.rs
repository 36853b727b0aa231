use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use tmoga_core::benchgen::EventModel;
use tmoga_core::GaParams;

#[derive(Debug, Parser)]
#[command(name = "tmoga", version, about = "Dynamic community detection with transfer-seeded evolutionary search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dynamic network with ground truth.
    Generate(GenerateArgs),
    /// Detect communities in every snapshot of a dynamic network.
    Detect(DetectArgs),
    /// Score partition files against ground truth and/or snapshots.
    Evaluate(EvaluateArgs),
    /// Compare initial-population strategies against ground truth.
    InitCompare(InitCompareArgs),
    /// Check the information-theoretic identities on random instances.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Synfix,
    Synvar,
    BirthDeath,
    ExpandContract,
    Intermittent,
    MergeSplit,
}

impl Model {
    pub fn event_model(self) -> Option<EventModel> {
        match self {
            Model::Synfix | Model::Synvar => None,
            Model::BirthDeath => Some(EventModel::BirthDeath),
            Model::ExpandContract => Some(EventModel::ExpandContract),
            Model::Intermittent => Some(EventModel::Intermittent),
            Model::MergeSplit => Some(EventModel::MergeSplit),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Synfix => "synfix",
            Model::Synvar => "synvar",
            Model::BirthDeath => "birth-death",
            Model::ExpandContract => "expand-contract",
            Model::Intermittent => "intermittent",
            Model::MergeSplit => "merge-split",
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub model: Model,
    /// Average number of inter-community edges per node (synfix, synvar).
    #[arg(long, default_value_t = 3)]
    pub z: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// JSON file with event-model parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub snapshots: Option<usize>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Modularity as snapshot cost, Community Score picks the final solution.
    Tmoga,
    /// Community Score as snapshot cost, modularity picks the final solution.
    Tmoga2,
    /// Shift-based density estimation in survival selection.
    Sde,
}

/// Search flags shared by `detect` and `init-compare`. Unset flags fall back
/// to the config file, then to the defaults.
#[derive(Debug, Args, Default)]
pub struct GaArgs {
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub cid_threshold: Option<f64>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Transfer probability.
    #[arg(long)]
    pub tp: Option<f64>,
    /// Crossover probability.
    #[arg(long)]
    pub cp: Option<f64>,
    /// Per-gene mutation probability.
    #[arg(long)]
    pub mp: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub workers: Option<usize>,
    /// JSON config: any search parameter plus `variant` and `workers`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
pub struct ConfigFile {
    #[serde(flatten)]
    pub params: GaParams,
    pub variant: Option<Variant>,
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Directory of `*.edges` snapshots, or the snapshot files in time order.
    #[arg(required = true)]
    pub input: Vec<PathBuf>,
    /// Directory of `*.truth` files, one per snapshot.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[command(flatten)]
    pub ga: GaArgs,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Directory of `*.part` files.
    #[arg(long)]
    pub partitions: PathBuf,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub snapshots: Option<PathBuf>,
    /// Directory for `evaluation.csv` and `evaluation.json`.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InitCompareArgs {
    /// Directory of `*.edges` snapshots.
    pub input: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    #[command(flatten)]
    pub ga: GaArgs,
    /// CSV output file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Add an instance that violates the checks.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}
