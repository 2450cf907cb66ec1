use thiserror::Error;

use crate::pcube::NotPartialCube;

/// Errors raised while reading graph, partition or mapping files.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("asymmetric adjacency: edge {u}-{v} has no matching back-edge")]
    Asymmetric { u: usize, v: usize },
    #[error("edge {u}-{v}: weight must be positive, got {weight}")]
    Weight { u: usize, v: usize, weight: i64 },
    #[error("header declares {declared} edges, adjacency lists contain {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("header declares {declared} vertices, found {found} adjacency lines")]
    VertexCount { declared: usize, found: usize },
}

/// Errors surfaced by the library's domain operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("graph is disconnected: vertex {unreachable} is unreachable from vertex 0")]
    Disconnected { unreachable: usize },
    #[error("not a partial cube: {0}")]
    NotPartialCube(#[from] NotPartialCube),
    #[error("label capacity exceeded: {what} needs {needed} bits, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: usize,
        limit: usize,
    },
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid topology spec `{0}`")]
    Topology(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
