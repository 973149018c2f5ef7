//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An enumeration request exceeds the hard size limit (e.g. too many points).
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// The requested operation is not available for this factor count; use the
    /// direct evaluator instead.
    #[error("unsupported capability: {0}")]
    Capability(String),

    /// A computation would exceed its factorial/time budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Matrix/table dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Invalid input data (bad ranks, inconsistent angles, nonpositive volume, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A text input failed to parse. `line` is 1-based; 0 means "not line-oriented".
    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    /// Exact integer arithmetic overflowed; results are never wrapped.
    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),

    /// A cache file is unreadable, corrupt, or from an incompatible version.
    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
