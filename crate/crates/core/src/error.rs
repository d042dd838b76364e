//! Error types shared across the library.

use thiserror::Error;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by constructors, evaluators and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or operation was handed a value outside its documented range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An evaluation was requested outside the mathematical domain of a formula.
    #[error("{operation}: {what}")]
    OutOfDomain {
        operation: &'static str,
        what: String,
    },

    /// A bracketing search ran past its configured limit without turning over.
    #[error("search for {what} exceeded the bracket limit {limit:e}")]
    BracketExhausted { what: &'static str, limit: f64 },

    /// A root solve found no sign change on the scanned interval.
    #[error("no sign change for {what} on [{lo}, {hi}]")]
    NoRoot {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    /// The expurgated exponent is zero over the whole rate range, so the
    /// balance equation has no crossing.
    #[error("expurgated exponent vanishes over (0, 1); no balanced rate exists")]
    NoPositiveExponent,

    /// The rate upper bound denominator lost positivity.
    #[error("nonpositive denominator {value} in the rate upper bound")]
    DegenerateDenominator { value: f64 },

    /// An objective evaluated to NaN or infinity where a finite value was required.
    #[error("objective not finite at {x}")]
    NonFinite { x: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(operation: &'static str, what: impl Into<String>) -> Self {
        Error::OutOfDomain {
            operation,
            what: what.into(),
        }
    }
}
