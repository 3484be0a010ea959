use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("entries from different fields in one container")]
    MixedField,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the zero form has no factorization")]
    ZeroForm,
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("arrangement is degenerate: points span a {span}-dimensional subspace of P_{n}")]
    Degenerate { span: usize, n: usize },
    #[error("arrangement is non-degenerate; nothing to split")]
    Nondegenerate,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by a well-formed input that fails a
    /// mathematical precondition, as opposed to malformed input.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            Error::Degenerate { .. } | Error::Nondegenerate | Error::Hypothesis(_) | Error::Inconsistent(_)
        )
    }
}
