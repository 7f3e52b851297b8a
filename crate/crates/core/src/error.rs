use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

/// Syntax error in a formula, with 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("formula uses X{index} but the dimension is {dim}")]
    DimensionTooSmall { index: usize, dim: usize },
    #[error("point {0} lies outside the unit cube")]
    OutsideCube(String),
    #[error("direction is zero")]
    ZeroDirection,
    #[error("direction leaves the unit cube immediately")]
    InfeasibleDirection,
    #[error("invalid differential valuation: {0}")]
    InvalidValuation(String),
    #[error("variable set H is not contained in K")]
    NotSubset,
    #[error("interval endpoint {0} must lie strictly between 0 and 1")]
    EndpointOutOfRange(String),
    #[error("formula synthesis failed: {0}")]
    SynthesisFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point is not in the set")]
    PointNotInSet,
    #[error("expected a {expected} set description")]
    WrongSetKind { expected: &'static str },
    #[error("internal soundness failure: {0}")]
    InternalSoundness(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}:{line}: {message}")]
    Input {
        path: String,
        line: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
