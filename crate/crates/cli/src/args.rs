use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "ssfi",
    version,
    about = "Single-sample feature importance from random forest prediction paths"
)]
pub struct Cli {
    /// Worker threads (defaults to the machine's parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leave-one-out SSFI scores for every row of a CSV dataset.
    Score(ScoreArgs),
    /// Repeated leave-one-out feature-selection experiments.
    Experiment(ExperimentArgs),
    /// Top-k SSFI pixels of IDX images, written as CSV, PGM and PPM overlays.
    Pixels(PixelsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskArg {
    Classification,
    Regression,
}

impl From<TaskArg> for ssfi_core::Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Classification => ssfi_core::Task::Classification,
            TaskArg::Regression => ssfi_core::Task::Regression,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ForestArgs {
    /// Trees per forest.
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    /// Maximum tree depth (unlimited when omitted).
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Depth-weight base for SSFI node importance.
    #[arg(long, default_value_t = 0.9, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Master seed; every random stream derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScoreArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the target column.
    #[arg(long)]
    pub target: String,
    #[arg(long, value_enum, default_value_t = TaskArg::Classification)]
    pub task: TaskArg,
    #[command(flatten)]
    pub forest: ForestArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Ssfi,
    Static,
    Random,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Forest,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum R2Arg {
    /// Squared Pearson correlation.
    Pearson,
    /// 1 - SS_res / SS_tot.
    Residual,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub target: String,
    #[arg(long, value_enum, default_value_t = TaskArg::Classification)]
    pub task: TaskArg,
    /// Feature selection methods to compare.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "ssfi,static,random"
    )]
    pub methods: Vec<MethodArg>,
    #[arg(long, value_enum, default_value_t = ModelArg::Forest)]
    pub model: ModelArg,
    /// Features kept per held-out sample.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 50)]
    pub repeats: usize,
    #[arg(long, value_enum, default_value_t = R2Arg::Pearson)]
    pub r2: R2Arg,
    /// JSON lines of `{sample_index, ranking}` for the `external` method.
    #[arg(long)]
    pub external_scores: Option<PathBuf>,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PixelsArgs {
    /// IDX image file (magic 0x00000803).
    #[arg(long)]
    pub images: PathBuf,
    /// IDX label file (magic 0x00000801).
    #[arg(long)]
    pub labels: PathBuf,
    /// Row indices of the images to explain.
    #[arg(long, value_delimiter = ',', required = true)]
    pub samples: Vec<usize>,
    /// Pixels highlighted per image.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Train each scoring forest on this many randomly drawn other images
    /// instead of all of them.
    #[arg(long)]
    pub train_subset: Option<usize>,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[arg(long)]
    pub out: PathBuf,
}
