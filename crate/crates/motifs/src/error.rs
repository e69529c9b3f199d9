use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed edge-list input.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// Self-loops are rejected at parse time.
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    /// Invalid argument or unsupported combination.
    #[error("{0}")]
    Domain(String),
    /// The sampled graph contains no k-node connected induced subgraph.
    #[error("empty sample: no {k}-node connected induced subgraph observed; retry with a larger sampling probability")]
    EmptySample { k: usize },
    /// Numeric failure (underflow, degenerate normalizer, degenerate mixture).
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// An internal invariant was violated; indicates a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("serialization failure: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
