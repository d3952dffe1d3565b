use thiserror::Error;

use crate::fields::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable index {0} out of range")]
    BadVariable(usize),
    #[error("linear map is singular")]
    SingularMap,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("empty input list")]
    EmptyList,
    #[error("expected a binary form (two variables, homogeneous)")]
    NotBinaryForm,
    #[error("not a ternary quartic: {0}")]
    NotQuartic(String),
    #[error("{0}")]
    Form(String),
    #[error("absolute invariants are undefined because I3 = 0")]
    I3Vanishes,
    #[error("curve is singular (discriminant I27 vanishes)")]
    Singular,
    #[error("inadmissible coordinate change: {0}")]
    Inadmissible(String),
    #[error("no admissible coordinate change found after {0} attempts")]
    FrameSearchExhausted(usize),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is a singular point of the curve")]
    SingularPoint,
    #[error("inconsistent flex typing at point: {0}")]
    FlexInconsistency(String),
    #[error("inconsistent calibration anchors: {0}")]
    InconsistentAnchors(String),
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("unknown stratum label `{0}`")]
    UnknownLabel(String),
    #[error("{0}")]
    Parse(#[from] crate::parse::ParseError),
    #[error("stratum data: {0}")]
    Data(String),
    #[error("classification requires characteristic 0")]
    NeedsCharacteristicZero,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
