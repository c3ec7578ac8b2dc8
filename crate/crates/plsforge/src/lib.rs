//! Two-separated (TS) partitions and proof labeling schemes.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: undirected graphs with arbitrary `u64` node ids, BFS balls,
//!   generators and a line-oriented text format.
//! * [`partition`]: TS partitions, cluster degeneracy and the three carving
//!   procedures (warmup, padded, and the randomized algorithm `A`).
//! * [`pls`]: labels, local views, the [`pls::Scheme`] trait and the
//!   completeness / soundness harnesses.
//! * [`schemes`]: concrete schemes, the 1-round to t-round compiler and the
//!   equality gadget with its two-party reduction.

pub mod bits;
pub mod graph;
pub mod partition;
pub mod pls;
pub mod rng;
pub mod schemes;

pub use bits::BitString;
pub use graph::{Cluster, Configuration, Graph, NodeId};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("empty cluster")]
    EmptyCluster,
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("prover failed: {0}")]
    Prover(String),
    #[error("verifier aborted: {0}")]
    Verifier(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
