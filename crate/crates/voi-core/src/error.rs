//! Errors raised on the computation path (as opposed to parsing/validation,
//! which lives in [`crate::model::ModelError`]).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown action index {index} (problem has {num_actions} actions)")]
    UnknownAction { index: usize, num_actions: usize },

    #[error("unknown outcome index {index} (channel `{channel}` has {num_outcomes} outcomes)")]
    UnknownOutcome {
        index: usize,
        channel: String,
        num_outcomes: usize,
    },

    /// The chosen action is not optimal at the base belief, so its reward row
    /// is not a subgradient of the value function there.
    #[error("action index {index} is not optimal at the base belief")]
    NotSubgradient { index: usize },

    #[error("invalid scan: {0}")]
    InvalidScan(String),

    /// A proved theorem failed on concrete data. This must never happen; it is
    /// the success signal of the randomized falsification harness and carries
    /// a full reproducer.
    #[error("theorem violation ({theorem}): {details}\nreproducer:\n{reproducer}")]
    TheoremViolation {
        theorem: &'static str,
        details: String,
        reproducer: String,
    },

    /// An internal exactness cross-check failed (implementation bug).
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
