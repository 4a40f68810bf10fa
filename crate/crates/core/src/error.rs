use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph file does not declare a node count")]
    MissingNodeCount,

    #[error("node count must be positive")]
    EmptyGraph,

    #[error("node id {node} out of range 1..={n}")]
    NodeOutOfRange { node: NodeId, n: usize },

    #[error(
        "dangling nodes without outlinks: {0:?} (use --patch-dangling to add uniform outlinks)"
    )]
    Dangling(Vec<NodeId>),

    #[error("node set is empty")]
    EmptySet,

    #[error("complement of the node set is empty; the accessibility assumption is undefined")]
    EmptyComplement,

    #[error("accessibility assumption violated: nodes {0:?} have no access to the complement")]
    AssumptionViolated(Vec<NodeId>),

    #[error("invalid damping factor {0}; expected 0 < c < 1")]
    DampingFactor(f64),

    #[error("invalid personalization vector: {0}")]
    Personalization(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular linear system")]
    Singular,

    #[error("mutation must keep at least one outlink")]
    EmptyChildren,

    #[error("edge ({0}, {1}) already present")]
    EdgePresent(NodeId, NodeId),

    #[error("edge ({0}, {1}) not present")]
    EdgeAbsent(NodeId, NodeId),

    #[error("proposition inapplicable: {0}")]
    Inapplicable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search space of {bits} bits exceeds the cap of {cap} bits")]
    CapExceeded { bits: u32, cap: u32 },

    #[error("|I| = {size} exceeds the permutation search bound {bound}")]
    SearchTooLarge { size: usize, bound: usize },

    #[error("target set must be a nonempty subset of I")]
    TargetNotSubset,
}

impl Error {
    /// Whether the error reports an infeasible instance rather than bad input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::AssumptionViolated(_)
                | Error::EmptyComplement
                | Error::CapExceeded { .. }
                | Error::SearchTooLarge { .. }
                | Error::Inapplicable(_)
        )
    }
}
