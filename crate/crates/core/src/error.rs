use thiserror::Error;

/// Errors produced by handle algebra, cotrajectory machinery and the verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdlcError {
    #[error("an index is never zero")]
    ZeroIndex,
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("not contained: {0}")]
    NotContained(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A resource bound was hit before a certificate was found. Never a wrong answer.
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A proven identity failed on a concrete instance; this is a library bug.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl TdlcError {
    pub fn is_unresolved(&self) -> bool {
        matches!(self, TdlcError::Unresolved(_))
    }
}

pub type Result<T> = std::result::Result<T, TdlcError>;
