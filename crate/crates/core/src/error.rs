use thiserror::Error;

use crate::halfint::HalfInt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// `2s` is not an integer, so no Hilbert space carries the representation.
    #[error("s = {s} violates the Dirac condition: 2s must be an integer (eg = n*hbar/2)")]
    DiracViolation { s: String },

    #[error("invalid truncation: jmax = {jmax} with |s| = {abs_s} ({reason})")]
    InvalidTruncation {
        jmax: HalfInt,
        abs_s: HalfInt,
        reason: &'static str,
    },

    #[error("invalid angular momentum indices: {0}")]
    InvalidIndex(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("cannot parse {input:?} as an exact half-integer: {reason}")]
    Parse { input: String, reason: String },

    #[error("quadrature grid too small: {0}")]
    GridTooSmall(String),

    #[error("undersampled winding: {0}")]
    Undersampled(String),

    #[error("classical state invariant violated: {0}")]
    StateInvariant(String),

    #[error("structure constants inconsistent: {0}")]
    StructureConstants(String),
}
