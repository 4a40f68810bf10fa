//! PageRank of a set of webpages and the link structures that maximize it.

pub mod brute;
pub mod calculus;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod linalg;
pub mod pagerank;
pub mod sim;
pub mod structures;
pub mod tolerance;

pub use error::{Error, Result};
pub use graph::{Edge, LinkPartition, NodeId, NodeSet, WebGraph};
pub use pagerank::{PageRankVector, RankingContext, TopSet, VisitSystem, VisitVector};
