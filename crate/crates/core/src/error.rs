use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no snapshots")]
    NoSnapshots,

    #[error("node universe mismatch: {0}")]
    NodeUniverse(String),

    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("undefined metric: {0}")]
    UndefinedMetric(&'static str),

    #[error("invalid gene at node {node}: {gene} is neither the node itself nor a neighbor")]
    InvalidGene { node: usize, gene: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("clique {clique} is not contained in a single community of the {which} partition")]
    UnstableClique { clique: usize, which: &'static str },

    #[error("infeasible generator configuration: {0}")]
    Infeasible(String),

    #[error("ground truth is missing for snapshot {0}")]
    MissingTruth(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
