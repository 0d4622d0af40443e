use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("truncation exceeded: quotient a_{index} requested but only {available} are known")]
    TruncationExceeded { index: usize, available: usize },
    #[error("validity horizon exceeded: orbit index {index} is not below q_N = {horizon}")]
    ValidityHorizon { index: u128, horizon: u128 },
    #[error("undecidable at validity: {0}")]
    Undecidable(String),
    #[error("depth cap of {0} partial quotients reached")]
    DepthCap(usize),
    #[error("mixed quadratic fields: {0}")]
    MixedField(String),
    #[error("input is rational")]
    RationalInput,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("digit constraint violated: {0}")]
    DigitConstraint(String),
    #[error("convergent table too shallow for {0}")]
    TableTooShallow(u128),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("exact equality detected where an irrational comparison was expected: {0}")]
    EqualityDetected(String),
}

pub type Result<T> = std::result::Result<T, Error>;
