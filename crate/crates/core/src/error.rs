use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Indices stored in the variants are
/// zero-based; the rendered messages use one-based row/column numbers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight matrix violates {invariant}: {detail}")]
    InvalidWeights {
        invariant: &'static str,
        detail: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-positive or non-finite entry {value} at position {}", index + 1)]
    NonPositive { index: usize, value: f64 },

    #[error("composition is off the graph simplex: component {} sums to {sum}, expected {kappa}", component + 1)]
    OffSimplex {
        component: usize,
        sum: f64,
        kappa: f64,
    },

    #[error("invalid vertex ordering for component {}: {detail}", component + 1)]
    InvalidPermutation { component: usize, detail: String },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("invalid contrast matrix: {0}")]
    InvalidContrast(String),

    #[error("Laplacian block is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("no convergence after {iterations} iterations (last objective {objective})")]
    NonConvergence { iterations: usize, objective: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to invalid
    /// input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular(_) | Error::NonConvergence { .. } | Error::Degenerate(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
