use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A denominator vanished while evaluating a continued fraction.
    #[error("division by zero while evaluating {0}")]
    DivisionByZero(String),

    /// An input violates a named invariant.
    #[error("invalid input: {invariant} ({detail})")]
    Validation { invariant: String, detail: String },

    #[error("unknown hole {0}")]
    UnknownHole(String),

    #[error("cannot cap the outer boundary {0}")]
    CapOuter(String),

    /// Two classes or books live on different hole universes.
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    #[error("feasibility search refused: {holes} holes exceeds the limit of {limit}")]
    SizeGuard { holes: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The daisy engine produced a twist that disagrees with its template.
    #[error("template mismatch at step {step}: {detail}")]
    TemplateMismatch { step: usize, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn validation(invariant: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant: invariant.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
