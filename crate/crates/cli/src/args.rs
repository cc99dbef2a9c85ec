use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use noisyqml::{LayerKind, Phase};

#[derive(Debug, Parser)]
#[command(
    name = "noisyqml",
    version,
    about = "Hybrid quantum-classical classifiers under device noise"
)]
pub struct Cli {
    /// Seed for every random choice of the command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory that receives all output files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    /// Only print errors.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a two-cluster Gaussian dataset as CSV.
    Synth(SynthArgs),
    /// Train a hybrid model and save it with its history.
    Train(TrainArgs),
    /// Evaluate a saved model on one or more backends.
    Eval(EvalArgs),
    /// Route and lower a circuit onto a device and report its size.
    Transpile(TranspileArgs),
    /// QPU time and money for a run.
    Cost(CostArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of samples (even).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 26)]
    pub dims: usize,
    /// Distance between the two cluster means.
    #[arg(long, default_value_t = 4.0)]
    pub sep: f64,
    /// File name inside the output directory.
    #[arg(long, default_value = "synth.csv")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file whose last column is the 0/1 label.
    #[arg(long)]
    pub data: PathBuf,
    /// The CSV has no header row.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhaseArg {
    Noiseless,
    Topology,
    Noisy,
}

impl From<PhaseArg> for Phase {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::Noiseless => Phase::Noiseless,
            PhaseArg::Topology => Phase::Topology,
            PhaseArg::Noisy => Phase::Noisy,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OptimizerArg {
    Adam,
    Spsa,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 8)]
    pub n_qubits: usize,
    /// angle-x, angle-y or amplitude-embedding.
    #[arg(long, default_value = "amplitude-embedding")]
    pub encoding: LayerKind,
    /// std, sel or bellman.
    #[arg(long, default_value = "std")]
    pub ansatz: LayerKind,
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, default_value_t = 0)]
    pub measured_qubit: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = PhaseArg::Noiseless)]
    pub phase: PhaseArg,
    /// Bundled device name or device file; required unless noiseless.
    #[arg(long)]
    pub device: Option<String>,
    /// Physical qubits for the virtual ones, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub layout: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = OptimizerArg::Adam)]
    pub optimizer: OptimizerArg,
    /// Adam learning rate.
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 10)]
    pub epochs: usize,
    #[arg(long, default_value_t = 16)]
    pub batch_size: usize,
    /// Stop after this many epochs without validation improvement.
    #[arg(long)]
    pub patience: Option<usize>,
    #[arg(long, default_value_t = 0.2)]
    pub validation_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Noiseless,
    Topology,
    Noisy,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Saved model file.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// Backend to evaluate on; repeat for several rows.
    #[arg(long = "backend", value_enum, default_value = "noiseless")]
    pub backends: Vec<BackendArg>,
    /// Device for the device backends: one shared by all, or one per
    /// device backend in order.
    #[arg(long = "device")]
    pub devices: Vec<String>,
    /// Estimate outputs from this many shots instead of exactly.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Invert every label before scoring.
    #[arg(long)]
    pub flip_labels: bool,
}

#[derive(Debug, Args)]
pub struct TranspileArgs {
    /// Transpile the ansatz of this saved model.
    #[arg(long, conflicts_with = "circuit")]
    pub model: Option<PathBuf>,
    /// Transpile a circuit in text form.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Bundled device name or device file.
    #[arg(long, default_value = "heavy-hex")]
    pub device: String,
    #[arg(long, value_delimiter = ',')]
    pub layout: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Measured QPU minutes.
    #[arg(long)]
    pub minutes: Option<f64>,
    /// Samples covered by --minutes (defaults to --samples).
    #[arg(long)]
    pub processed: Option<u64>,
    /// Samples to estimate for, at --per-sample-s each.
    #[arg(long)]
    pub samples: Option<u64>,
    /// QPU seconds per sample.
    #[arg(long = "per-sample-s")]
    pub per_sample_seconds: Option<f64>,
    /// USD per QPU minute.
    #[arg(long, default_value_t = 96.0)]
    pub rate: f64,
    /// Size of the full dataset, for the processed fraction.
    #[arg(long)]
    pub total: Option<u64>,
}
