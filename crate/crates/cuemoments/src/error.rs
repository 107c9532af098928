use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero function")]
    DivisionByZeroFunction,
    #[error("pole at evaluation point {0}")]
    PoleAtEvaluationPoint(String),
    #[error("power series has zero constant term")]
    ZeroConstantTerm,
    #[error("odd exponent {0} is not supported by the exact engine; use Monte Carlo")]
    UnsupportedOddExponent(String),
    #[error("arity {arity} exceeds the bound {max}")]
    ArityBoundExceeded { arity: usize, max: usize },
    #[error("combinatorial bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("invalid moment specification: {0}")]
    InvalidSpec(String),
    #[error("index constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("half-integer powers did not cancel at order {0}")]
    ResidualHalfIntegerPowers(usize),
    #[error("cannot reach {0} digits")]
    PrecisionUnachievable(u32),
    #[error("quadrature tolerance not met: estimated error {0:e}")]
    QuadratureToleranceNotMet(f64),
    #[error("integrand is not integrable against the weight: {0}")]
    NonIntegrable(String),
    #[error("{samples} samples cannot form {blocks} blocks")]
    TooFewSamplesForBlocks { samples: usize, blocks: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
