use thiserror::Error;

/// Errors raised by the structure engine and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed grammar input; `pos` is a byte offset into the source text.
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// The descriptor lacks a capability the operation needs
    /// (multiplication on a non-semiring, inversion outside a semifield, ...).
    #[error("capability error: {0}")]
    Capability(String),

    /// A value does not fit the descriptor it was paired with.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Operation undefined at this input (level of zero, division by zero, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("not summable: {0}")]
    NotSummable(String),

    /// A bounded family with no least upper bound inside the structure.
    #[error("not representable: {0}")]
    NotRepresentable(String),

    /// A family unbounded above in a structure without a greatest element.
    #[error("unbounded: {0}")]
    Unbounded(String),

    /// A density whose integral leaves ℙ (an infinite residue or top).
    #[error("not in P: {0}")]
    NotInP(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// True for errors that come from malformed text rather than from the mathematics.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
