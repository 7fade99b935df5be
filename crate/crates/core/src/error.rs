use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the model, planner, and simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("probability `{name}` = {value} outside the open interval (0, 1)")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("planning horizon must be at least 1")]
    ZeroHorizon,

    #[error("mission has {actual} sites but the scenario expects {expected}")]
    MissionLength { expected: usize, actual: usize },

    #[error("belief ({alpha}, {beta}) is not on the solution lattice")]
    OffLattice { alpha: f64, beta: f64 },

    #[error("no episodes to summarize")]
    EmptyLogs,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Errors from loading a run configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The document does not match the schema (bad type, unknown field, malformed JSON).
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// The document parsed but a value violates a model constraint.
    #[error("invalid value for `{field}`: {message}")]
    Constraint { field: String, message: String },
}

/// Errors from running an experiment command.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Model(#[from] Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed csv {path} line {line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("thread pool: {0}")]
    Pool(String),
}

impl RunError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.into(),
            source,
        }
    }
}
