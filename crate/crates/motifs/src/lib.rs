//! Small-subgraph statistics for labeled graphs, end to end: exact census,
//! random edge sampling, and inference of the original graph's motif
//! concentrations from a sampled graph alone.
//!
//! The pipeline in one pass:
//!
//! 1. [`graph`] parses edge lists into an immutable labeled graph (undirected,
//!    directed, or signed edges over an undirected skeleton).
//! 2. [`catalog`] fixes the motif classes for a `(k, kind)` pair and
//!    classifies any connected induced subgraph in O(1).
//! 3. [`census`] enumerates every 3-, 4-, or 5-node connected induced
//!    subgraph exactly, once each, via pivot enumeration with responsible-node
//!    deduplication (plus a brute-force oracle for verification).
//! 4. [`sampler`] keeps each skeleton edge independently with probability `p`,
//!    by seeded coin or by a symmetric universal hash that is stream-safe.
//! 5. [`inference`] inverts the sampling distortion: the expected sampled
//!    census is a known triangular linear map of the original census, so
//!    back-substitution yields unbiased estimates of the original counts and
//!    concentrations.
//! 6. [`bounds`] computes Fisher-information lower bounds on the estimator's
//!    per-class MSE, and [`eval`] measures the actual error with a seeded,
//!    parallel Monte Carlo protocol.
//!
//! The `motifs` binary exposes each stage as a subcommand; see the README.

pub mod bounds;
pub mod catalog;
pub mod census;
pub mod error;
pub mod eval;
pub mod generators;
pub mod graph;
pub mod inference;
pub mod sampler;
mod small;

pub use error::{Error, Result};
