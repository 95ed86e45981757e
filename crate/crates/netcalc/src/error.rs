use std::fmt;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by curve construction and by the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An arithmetic form with no defined value, e.g. `(+inf) + (-inf)`,
    /// `0 * inf`, `inf / inf` or division by zero.
    #[error("undefined arithmetic form: {0}")]
    UndefinedForm(&'static str),

    /// Evaluation outside the domain of a sequence or curve.
    #[error("time {t} is outside the domain {domain}")]
    OutOfDomain { t: String, domain: String },

    /// A structural invariant of a sequence or curve was violated.
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    /// A parameter violated an operation precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operand must be non-decreasing (pseudo-inverses, composition,
    /// horizontal deviation).
    #[error("operand is not non-decreasing: {0}")]
    NotNonDecreasing(&'static str),

    /// Operand mixes values that would produce an undefined form, e.g.
    /// convolving a curve with -inf values against one with +inf values.
    #[error("operands mix +inf and -inf values in {0}")]
    MixedInfinities(&'static str),

    /// Empty input where at least one item is required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Closure iteration failed to stabilize within the guard bound.
    #[error("closure did not stabilize: {0}")]
    ClosureDiverged(String),

    /// Internal invariant failure; indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn out_of_domain(t: impl fmt::Display, domain: impl fmt::Display) -> Self {
        Error::OutOfDomain {
            t: t.to_string(),
            domain: domain.to_string(),
        }
    }
}
