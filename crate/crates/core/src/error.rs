use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no edges")]
    NoEdges,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("window longer than horizon (l = {l}, horizon = {horizon})")]
    WindowTooLong { l: usize, horizon: usize },

    #[error("node {0} is not in the restriction set")]
    NodeNotInSubset(NodeId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty candidate set")]
    EmptyCandidates,

    #[error("internal state error: {0}")]
    InternalState(String),
}
