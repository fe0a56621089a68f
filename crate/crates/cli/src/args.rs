use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "tgkit",
    version,
    about = "Temporal event graph datasets and metrics"
)]
pub struct Cli {
    /// Worker threads for document-level parallelism (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prune a corpus and write the community pairs, next-event examples,
    /// splits and statistics.
    Build {
        /// Annotated corpus, one JSON document per line.
        corpus: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Pruning configuration (TOML).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Train, valid and test proportions.
        #[arg(long, value_delimiter = ',', default_values_t = [0.8, 0.1, 0.1])]
        ratios: Vec<f64>,
    },
    /// Predict a chain of `before` edges over each pair's gold events.
    Baseline {
        /// Community pairs written by `build`.
        pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score predictions against gold records.
    Eval {
        gold: PathBuf,
        predictions: PathBuf,
        #[arg(long, value_enum, default_value_t = Task::Graph)]
        task: Task,
        /// Write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split one DOT graph into communities, one DOT file each.
    Communities {
        dot: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode a JSON graph as DOT.
    Encode {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a DOT graph to JSON.
    Decode {
        dot: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print pruning and dataset statistics without writing a dataset.
    Stats {
        corpus: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the statistics as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic annotated corpus.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        docs: usize,
        #[arg(long, default_value_t = 10)]
        events_per_doc: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_density: f64,
        #[arg(long, default_value_t = 0.15)]
        banned_verb_rate: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Print the default pruning configuration.
    Config,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Task {
    /// Next-event generation records.
    #[value(alias = "task1")]
    Event,
    /// Graph generation records.
    #[value(alias = "task2")]
    Graph,
}
