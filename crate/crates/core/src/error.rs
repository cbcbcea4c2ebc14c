use std::path::PathBuf;

use crate::topology::NodeId;

/// Everything that can go wrong while building networks, decoding paths or
/// running the optimizers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node count {pn} is too small, at least 4 nodes are required")]
    InvalidNodeCount { pn: usize },
    #[error("link density {value} is outside [0, 1]")]
    InvalidDensity { value: f64 },
    #[error("invalid bandwidth range [{min}, {max}], need 0 < min <= max")]
    InvalidBandwidthRange { min: f64, max: f64 },
    #[error("node {node} does not exist in a network of {pn} nodes")]
    InvalidNode { node: NodeId, pn: usize },
    #[error("source and destination are both node {0}")]
    SameEndpoints(NodeId),
    #[error("priority vector has length {got}, network has {expected} nodes")]
    PriorityLength { got: usize, expected: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("chromosome lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid cut points j={j}, k={k} for length {len}")]
    InvalidCutPoints { j: usize, k: usize, len: usize },
    #[error("invalid gene index {index} for length {len}")]
    InvalidIndex { index: usize, len: usize },
    #[error("no path found from {from} to {to}")]
    NoPathFound { from: NodeId, to: NodeId },
    #[error("exhaustive search limited to {cap} nodes, network has {pn}")]
    OracleTooLarge { pn: usize, cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("report has no records")]
    EmptyReport,
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
