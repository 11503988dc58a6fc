use std::io;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("graph generation failed: {0}")]
    Generation(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is disconnected: node {node} is unreachable from node {root}")]
    Disconnected { root: usize, node: usize },

    #[error("expected a tree: {0}")]
    NotATree(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("parameter vector has length {got}, circuit expects {expected}")]
    ParamLength { expected: usize, got: usize },

    #[error("width mismatch: state has {state} qubits, graph has {graph} nodes")]
    WidthMismatch { state: usize, graph: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status used by the command-line front end: 2 for bad
    /// input, 3 for resource guards, 4 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_)
            | Error::InvalidGraph(_)
            | Error::Parse { .. }
            | Error::Disconnected { .. }
            | Error::NotATree(_)
            | Error::ParamLength { .. }
            | Error::WidthMismatch { .. } => 2,
            Error::Resource(_) | Error::Generation(_) => 3,
            Error::Numerical(_) => 4,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
