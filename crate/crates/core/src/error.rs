use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A violated equisingularity-class invariant, named after the condition it breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassViolation {
    MultiplicityTooSmall { n: BigInt },
    NoExponents,
    NonPositiveExponent { index: usize },
    NotIncreasing { index: usize },
    FirstExponentTooSmall { n: BigInt, m1: BigInt },
    /// `e_{index-1}` divides `m_index`.
    Divides { index: usize, e: BigInt, m: BigInt },
    FinalGcd { e: BigInt },
}

impl fmt::Display for ClassViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassViolation::MultiplicityTooSmall { n } => {
                write!(f, "multiplicity n = {n} is below 2")
            }
            ClassViolation::NoExponents => write!(f, "genus 0: no characteristic exponents"),
            ClassViolation::NonPositiveExponent { index } => {
                write!(f, "m{index} is not positive")
            }
            ClassViolation::NotIncreasing { index } => {
                write!(f, "m{index} does not exceed m{}", index - 1)
            }
            ClassViolation::FirstExponentTooSmall { n, m1 } => {
                write!(f, "n < m1 fails (n = {n}, m1 = {m1})")
            }
            ClassViolation::Divides { index, e, m } => write!(
                f,
                "e{} divides m{index} (e{} = {e}, m{index} = {m})",
                index - 1,
                index - 1
            ),
            ClassViolation::FinalGcd { e } => write!(f, "e_r = {e} instead of 1"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator must be positive, got {0}")]
    NonPositiveDenominator(BigInt),
    #[error("numerator must be nonnegative, got {0}")]
    NegativeNumerator(BigInt),
    #[error("index {index} out of range (valid: {min}..={max})")]
    IndexOutOfRange { index: usize, min: usize, max: usize },
    #[error("forced remainder sequence breaks at step {step}: {reason}")]
    ForcedRemainder { step: usize, reason: String },
    #[error("invalid class: {0}")]
    InvalidClass(ClassViolation),
    #[error("cannot canonicalize exponents: {0}")]
    Canonicalize(String),
    #[error("cannot parse class spec {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("branch does not belong to this class: {0}")]
    BranchMismatch(String),
    #[error("unsupported format {0:?}")]
    UnsupportedFormat(String),
    #[error("malformed cluster: {0}")]
    MalformedCluster(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("outside desk scale: {0}")]
    DeskScale(String),
    #[error("series input is not a polynomial")]
    NotPolynomial,
    #[error("degenerate elimination: {0}")]
    Degenerate(String),
}

impl From<ClassViolation> for Error {
    fn from(v: ClassViolation) -> Self {
        Error::InvalidClass(v)
    }
}
