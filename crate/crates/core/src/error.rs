use thiserror::Error;

/// Errors raised by exact scalar arithmetic.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("isolating interval [{lo}, {hi}] contains {count} distinct roots, expected exactly one")]
    NotIsolating { lo: String, hi: String, count: usize },
    #[error("defining polynomial must have degree at least one")]
    ConstantPolynomial,
    #[error("malformed scalar: {0}")]
    Malformed(String),
    #[error("interval scalar has no exact representation")]
    NotExact,
    #[error("divisor enclosure could not be separated from zero")]
    IndeterminateDivision,
}

/// Errors raised by series evaluation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("argument {0} lies outside [0, 1]")]
    Domain(String),
    #[error("coefficient sequence does not provide the tail bound needed for a certified enclosure")]
    NoTailBound,
    #[error("sign sequence prefix of length {have} is too short for the requested width")]
    InsufficientPrefix { have: usize },
    #[error("sign of a scalar could not be resolved within the precision budget")]
    Unresolved,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Errors raised by the step engine and the extremum classifiers.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StepError {
    #[error("alpha must lie in the open interval (-2, 2)")]
    AlphaOutOfRange,
    #[error("sign of a partial sum could not be resolved at index {index}")]
    Unresolved { index: usize },
    #[error("comparison could not be resolved: {0}")]
    UnresolvedComparison(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
