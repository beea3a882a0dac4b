//! Crate-wide error taxonomy.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: u32, n: usize },

    #[error("self-loop on node {0} not allowed")]
    SelfLoop(u32),

    #[error("edge sign must be -1 or +1, got {0}")]
    BadSign(i32),

    #[error("duplicate edge between {u} and {v}")]
    DuplicateEdge { u: u32, v: u32 },

    #[error("{what} must lie in {range}, got {got}")]
    OutOfRange {
        what: &'static str,
        range: &'static str,
        got: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("non-finite {term} at epoch {epoch}")]
    NonFiniteLoss { term: &'static str, epoch: usize },

    #[error("cannot {action}: graph has no {missing}")]
    DegenerateGraph {
        action: &'static str,
        missing: &'static str,
    },

    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("schema error in {path}: {msg}")]
    Schema { path: String, msg: String },

    #[error("manifest check failed for {field}: expected {expected}, got {got}")]
    ManifestMismatch {
        field: &'static str,
        expected: i64,
        got: i64,
    },

    #[error("checkpoint corrupt: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
