use std::path::PathBuf;

use thiserror::Error;

use crate::connectivity::QueryError;
use crate::graph::GraphError;
use crate::partition::PartitionError;
use crate::tree::TreeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("partition: {0}")]
    Partition(#[from] PartitionError),
    #[error("tree: {0}")]
    Tree(#[from] TreeError),
    #[error("query: {0}")]
    Query(#[from] QueryError),
    #[error("audit failed:\n{0}")]
    AuditFailed(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVARIANT: i32 = 2;
    pub const BAD_INPUT: i32 = 3;
    pub const IO: i32 = 4;
}

fn tree_exit_code(e: &TreeError) -> i32 {
    match e {
        TreeError::Io { .. } | TreeError::MissingLeafFile { .. } => exit::IO,
        TreeError::PlanMismatch(_)
        | TreeError::UnknownSuperNode(_)
        | TreeError::NotALeaf(_)
        | TreeError::NotLoaded(_) => exit::BAD_INPUT,
        TreeError::UnknownEndpoint { .. }
        | TreeError::UnmatchedEdge { .. }
        | TreeError::ResidualAtRoot { .. }
        | TreeError::NotFilled
        | TreeError::VersionMismatch { .. }
        | TreeError::Checksum { .. }
        | TreeError::Corrupt { .. } => exit::INVARIANT,
    }
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Graph(GraphError::Io { .. }) | Error::Io { .. } => exit::IO,
            Error::Graph(_) | Error::Partition(_) | Error::Usage(_) => exit::BAD_INPUT,
            Error::Tree(e) | Error::Query(QueryError::Tree(e)) => tree_exit_code(e),
            Error::Query(_) => exit::BAD_INPUT,
            Error::AuditFailed(_) => exit::INVARIANT,
        }
    }
}
