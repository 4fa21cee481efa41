use thiserror::Error;

/// Error type shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is malformed (bad dimensions, bad density,
    /// unsupported degree bound, and so on).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A documented precondition of the operation does not hold for the
    /// supplied inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A structural invariant that the library itself is supposed to
    /// maintain was found broken. Indicates corrupted inputs built outside
    /// the library, or a bug.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// The exact solver was asked for an instance above its configured cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Bug trap: a repair loop or search that is guaranteed to succeed
    /// failed to make progress. Carries a diagnostic dump.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
