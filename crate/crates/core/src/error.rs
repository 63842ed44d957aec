use thiserror::Error;

use crate::linker::HypothesisReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed arguments: out-of-range vertices, overlapping terminal sets,
    /// non-permutations and the like.
    #[error("invalid input: {0}")]
    Input(String),

    /// A `TRN` document that does not describe a tournament.
    #[error("line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },

    /// A step whose success is guaranteed by the degree and connectivity
    /// hypotheses failed, or an internal consistency check did not hold.
    #[error("precondition violated in {step}: {detail}")]
    Precondition { step: String, detail: String },

    /// The tournament does not meet the connectivity / out-degree requirements.
    #[error("hypothesis not met: {0}")]
    Hypothesis(HypothesisReport),

    /// An exhaustive oracle was asked to work past its size limit.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(step: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition {
            step: step.into(),
            detail: detail.into(),
        }
    }
}
