//! Crate-wide error type. Every precondition violation maps to a named
//! variant so callers (and the CLI) can report exactly which one failed.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("characteristic {p} divides {n}; the operation excludes this case")]
    BadCharacteristic { p: u64, n: u64 },
    #[error("factor search exceeded the trial-division bound {0}")]
    FactorBoundExceeded(u64),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("cannot parse field tag {0:?}")]
    ParseField(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("triple contains a repeated point")]
    DegenerateTriple,
    #[error("degenerate four-point configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("configuration needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("points in a configuration must be pairwise distinct")]
    DuplicatePoint,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("permutation must have degree 6, got {0}")]
    WrongDegree(usize),
    #[error("{p} does not divide {n}")]
    NotDivisible { p: u64, n: u64 },
    #[error("the case p=2, i=1 is impossible")]
    ImpossibleCase,
    #[error("map does not stabilize the projective class of the form")]
    NotInStabilizer,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("degree m(a,b) is negative: {0}")]
    NegativeDegree(i64),
    #[error("form does not split over the working field; unsplit factor: {0}")]
    NonSplitForm(String),
    #[error("operation requires a finite field")]
    NotFinite,
    #[error("twist must be nonzero")]
    ZeroTwist,
    #[error("j-invariant {0} is excluded (j = 0 and j = 1728 are outside the family)")]
    ExcludedJ(String),
    #[error("prime {0} too large for an exhaustive scan (limit 10^6)")]
    FieldTooLarge(u64),
    #[error("malformed JSON value: {0}")]
    Json(String),
}

impl Error {
    /// Stable name of the violated precondition, for machine-readable error
    /// payloads.
    pub fn precondition_name(&self) -> &'static str {
        match self {
            Error::ZeroInput => "nonzero-input",
            Error::DivisionByZero => "nonzero-divisor",
            Error::FieldMismatch => "same-field",
            Error::NotOddPrime(_) => "odd-prime-field",
            Error::BadCharacteristic { .. } => "characteristic-guard",
            Error::FactorBoundExceeded(_) => "factor-bound",
            Error::ParseScalar(_) => "scalar-syntax",
            Error::ParseField(_) => "field-syntax",
            Error::DegenerateInput(_) => "nondegenerate-input",
            Error::SingularMatrix => "invertible-matrix",
            Error::DegenerateTriple => "distinct-triple",
            Error::DegenerateConfiguration(_) => "admissible-configuration",
            Error::TooFewPoints(_) => "at-least-three-points",
            Error::DuplicatePoint => "distinct-points",
            Error::PreconditionViolated(_) => "precondition",
            Error::WrongDegree(_) => "degree-six",
            Error::NotDivisible { .. } => "divisibility",
            Error::ImpossibleCase => "possible-case",
            Error::NotInStabilizer => "stabilizing-map",
            Error::InternalInconsistency(_) => "internal",
            Error::NegativeDegree(_) => "nonnegative-degree",
            Error::NonSplitForm(_) => "split-form",
            Error::NotFinite => "finite-field",
            Error::ZeroTwist => "nonzero-twist",
            Error::ExcludedJ(_) => "admissible-j",
            Error::FieldTooLarge(_) => "scan-bound",
            Error::Json(_) => "well-formed-json",
        }
    }
}
