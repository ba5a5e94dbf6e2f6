use std::fmt;

use crate::lp::LpError;
use crate::rational::{format_rational, Rational};

/// One violated instance or scheme invariant, with the place it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    ProbabilityNotNormalized { location: String, sum: Rational },
    NegativeProbability { location: String, value: Rational },
    DimensionMismatch { location: String, expected: usize, found: usize },
    MalformedRational { location: String, text: String },
    IndexOutOfRange { location: String, index: usize, limit: usize },
    PaymentModel { location: String, detail: String },
    Empty { location: String },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::ProbabilityNotNormalized { location, sum } => {
                write!(f, "{location}: probabilities sum to {}, not 1", format_rational(sum))
            }
            ValidationIssue::NegativeProbability { location, value } => {
                write!(f, "{location}: negative probability {}", format_rational(value))
            }
            ValidationIssue::DimensionMismatch { location, expected, found } => {
                write!(f, "{location}: expected length {expected}, found {found}")
            }
            ValidationIssue::MalformedRational { location, text } => {
                write!(f, "{location}: malformed number {text:?}")
            }
            ValidationIssue::IndexOutOfRange { location, index, limit } => {
                write!(f, "{location}: index {index} out of range (< {limit} required)")
            }
            ValidationIssue::PaymentModel { location, detail } => write!(f, "{location}: {detail}"),
            ValidationIssue::Empty { location } => write!(f, "{location}: must not be empty"),
        }
    }
}

/// Every invariant violation found while validating one value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationErrors(pub Vec<ValidationIssue>);

impl ValidationErrors {
    pub fn issues(&self) -> &[ValidationIssue] {
        &self.0
    }

    pub(crate) fn into_result(self) -> Result<(), Error> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Witness that an instance lacks positive externalities:
/// `g_i(S) < g_i(S \ {j})` in `state`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExternalityWitness {
    pub state: usize,
    pub subset: u32,
    pub receiver: usize,
    pub other: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(ValidationErrors),
    #[error("instance is not symmetric under action permutations")]
    NotSymmetric,
    #[error("operation needs {expected} actions, instance has {found}")]
    WrongActionCount { expected: usize, found: usize },
    #[error("{columns} columns exceed the configured limit of {limit}")]
    SizeLimitExceeded { columns: usize, limit: usize },
    #[error("characterization mismatch in {context}: LP optimum {lp}, characterization {found}")]
    CharacterizationMismatch { context: String, lp: Rational, found: Rational },
    #[error("receiver {receiver} has nonzero expected payment on a zero-probability branch (action {action})")]
    InconsistentPayments { receiver: usize, action: u8 },
    #[error("positive externalities violated: state {}, set {:#b}, receiver {}, other {}", .0.state, .0.subset, .0.receiver, .0.other)]
    PositiveExternalityViolated(ExternalityWitness),
    #[error("sender payoff is not monotone in state {state}: f({subset:#b}) > f({superset:#b})")]
    NonMonotoneSender { state: usize, subset: u32, superset: u32 },
    #[error("scheme repair did not terminate within {passes} moves")]
    NonTermination { passes: usize },
    #[error("constraint generation exceeded {rounds} rounds")]
    IterationLimit { rounds: usize },
    #[error("separation oracle is unsound: {0}")]
    OracleUnsound(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("instance generation failed: {0}")]
    GenerationFailed(String),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
