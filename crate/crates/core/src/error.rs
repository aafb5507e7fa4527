use std::path::PathBuf;

use crate::dirichlet::TemperatureField;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("graph construction failed: {0}")]
    Construction(String),

    #[error("singular Dirichlet system: the component containing node {node} has no seed")]
    SingularSystem { node: usize },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        best: Box<TemperatureField>,
    },

    #[error("mean over an empty node set")]
    EmptySet,

    #[error("invalid seeds: {0}")]
    InvalidSeeds(String),

    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("degenerate block-model parameters: {0}")]
    DegenerateParams(String),

    #[error("graph generation failed: {0}")]
    Generation(String),

    #[error("seed sampling failed: {0}")]
    Sampling(String),

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("repetition {repetition} failed: {source}")]
    Repetition {
        repetition: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors raised by the numerical layer rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::SingularSystem { .. } | Error::Convergence { .. } => true,
            Error::Repetition { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
