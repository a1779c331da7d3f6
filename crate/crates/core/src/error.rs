use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the fitting pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A distribution parameter, matrix factorization or scale left its valid domain.
    #[error("numeric domain error in {context}: {detail}")]
    NumericDomain { context: String, detail: String },

    /// A graph could not be built (fewer than two observations, bad neighbor count).
    #[error("empty graph: {0}")]
    EmptyGraph(String),

    /// Inputs of mismatched shape were combined.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Invalid configuration or argument value.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A chain could not be summarised because no draws were stored.
    #[error("chain output holds no stored draws")]
    EmptyChain,

    /// A sweep failed at a given iteration of a chain.
    #[error("iteration {iteration}: {source}")]
    Chain {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    /// A simulation job failed.
    #[error("{model}, replicate {rep}, grid point {grid_index}: {source}")]
    Job {
        model: String,
        rep: usize,
        grid_index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Malformed tabular input.
    #[error("{path}: row {row}, column {column}: {detail}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: usize,
        detail: String,
    },

    /// Column layout of an input file does not match what the command expects.
    #[error("{path}: {detail}")]
    Schema { path: PathBuf, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::NumericDomain {
            context: context.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures that originate in the numerics rather than in I/O or usage.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NumericDomain { .. } | Error::EmptyChain => true,
            Error::Chain { source, .. } | Error::Job { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}
