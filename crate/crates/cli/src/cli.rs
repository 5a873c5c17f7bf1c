use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "gcoda", version, about = "Compositional data analysis on graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Laplacian, connected components and spectrum of a weight graph.
    Laplacian(LaplacianArgs),
    /// Graph log-ratio coordinates of a data matrix (or their inverse).
    Transform(TransformArgs),
    /// Learn a graph on the parts of a data matrix.
    Learn(LearnArgs),
    /// Zero-sum regression projected onto a learned graph.
    Regress(RegressArgs),
}

/// A weight graph given either as a dense matrix or as an edge list.
#[derive(Args, Debug, Clone, Serialize)]
pub struct GraphInput {
    /// Dense symmetric weight matrix (CSV, optional header row).
    #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
    pub weights: Option<PathBuf>,

    /// Edge list `i,j,w` with one-based vertices (CSV, optional header).
    #[arg(long)]
    pub edges: Option<PathBuf>,

    /// Number of vertices for an edge list; defaults to the largest index.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct LaplacianArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    /// Output directory.
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    /// `(αI + L)^{1/2} log x`.
    Clrw,
    /// Cholesky-based graph ilr.
    Gilr1,
    /// Spectral graph ilr.
    Gilr2,
    /// Projections onto the Laplacian eigenvectors.
    Fourier,
}

#[derive(Args, Debug, Serialize)]
pub struct TransformArgs {
    /// Data matrix with a header row of part names; with `--invert`, the
    /// coordinate table written by a previous run.
    #[arg(long)]
    pub data: PathBuf,

    #[command(flatten)]
    pub graph: GraphInput,

    #[arg(long, value_enum)]
    pub kind: TransformKind,

    /// Weight of the absolute information; 0 gives scale-invariant
    /// coordinates.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,

    /// Part (name or one-based index) moved to the front of its component
    /// for gilr1. May be repeated, at most once per component.
    #[arg(long)]
    pub pivot: Vec<String>,

    /// Map coordinates back to compositions.
    #[arg(long)]
    pub invert: bool,

    /// Part names for `--invert` when the graph input has no header.
    #[arg(long, value_delimiter = ',')]
    pub names: Option<Vec<String>>,

    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct LearnArgs {
    /// Data matrix with a header row of part names.
    #[arg(long)]
    pub data: PathBuf,

    /// JSON method configuration, e.g. `{"method": "stepwise", "maxEdges": 10}`.
    #[arg(long)]
    pub config: PathBuf,

    /// Value substituted for zero entries before taking logs.
    #[arg(long, default_value_t = 0.5)]
    pub zero_value: f64,

    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct RegressArgs {
    /// Data matrix with a header row of part names.
    #[arg(long)]
    pub data: PathBuf,

    /// Response, one value per data row (single column, header row).
    #[arg(long)]
    pub response: PathBuf,

    /// Learned graph (`graph.csv` from `learn`).
    #[arg(long)]
    pub graph: PathBuf,

    /// Edge counts to evaluate; defaults to every prefix of the graph.
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,

    /// Edge count used for the model graph; defaults to the largest of `ks`.
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long, default_value_t = 100)]
    pub reps: usize,

    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub train_fraction: f64,

    /// Seed of the train/test splits.
    #[arg(long, env = "GCODA_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Lasso penalty of the zero-sum baseline.
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,

    #[arg(long, default_value_t = 0.5)]
    pub zero_value: f64,

    /// Keep the response on its original scale instead of standardizing it.
    #[arg(long)]
    pub no_standardize: bool,

    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
}
