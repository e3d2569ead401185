//! Error taxonomy shared by every operation in the crate.

/// Errors produced by geometry, certificate and search routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Vector/matrix dimensions do not agree with the ambient dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Input data is malformed (non-finite entries, empty lists, out-of-range
    /// parameters, points outside required sets).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested operation has no implemented path for this body
    /// representation.
    #[error("unsupported representation: {0}")]
    Unsupported(String),

    /// A numerical routine failed to converge or hit a degenerate pivot.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The operation would exceed a combinatorial or size budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A documented precondition of the operation does not hold for the data.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::BudgetExceeded(msg.into())
    }
}
