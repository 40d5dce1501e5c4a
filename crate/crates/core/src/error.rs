//! Error type shared by every module of the crate.

use crate::arith::Rat;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("pole at {0}")]
    Pole(Rat),

    #[error("negative order {0}")]
    NegativeOrder(i64),

    /// Coefficient of a graded operator is undefined at a reachable degree.
    #[error("ill-formed operator: shift {shift} has a pole at degree {degree}")]
    PoleAtDegree { shift: i64, degree: u64 },

    /// Coefficient of a negative shift does not vanish where it would leave `C[z]`.
    #[error("ill-formed operator: shift {shift} is nonzero at degree {degree}")]
    RangeViolation { shift: i64, degree: u64 },

    #[error("invalid weight h = {0}: 2h must not be a nonpositive integer")]
    InvalidWeight(Rat),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("decomposition is not direct: {0}")]
    NotDirect(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no index convention reproduces the Witt bracket")]
    NoConvention,
}
