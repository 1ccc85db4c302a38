use thiserror::Error;

/// Library-wide error type. Variants that represent *verified-false* outcomes
/// (as opposed to contract violations) are kept separate so callers can map
/// them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("not a unit: {0}")]
    NotAUnit(String),

    /// The target ring lacks the roots of unity a character value needs.
    #[error("missing roots of unity: {0}")]
    MissingRoots(String),

    /// A p-adic computation ran out of working precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// A declared property failed its check (margin rows, battery member,
    /// congruence of certificates). This is a *result*, not a bug.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// Caller violated a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::RingMismatch(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
