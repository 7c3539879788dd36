use thiserror::Error;

/// Errors raised by the arithmetic, series, quadrature and Machin layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmiError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative operand for square root")]
    NegativeOperand,
    #[error("requested {requested} fractional digits but value only carries {available}")]
    InsufficientScale { requested: u32, available: u32 },
    #[error("x*t is zero; the alpha/beta iteration is undefined there")]
    ZeroArgument,
    #[error("empty interval: lower bound must be strictly below upper bound")]
    EmptyInterval,
    #[error("integrand evaluation failed: {0}")]
    DomainError(String),
    #[error("floor/ceil of {value} is within guard noise; raise the precision")]
    AmbiguousRounding { value: String },
    #[error("exact rational needs ~{digits} digits, over the cap of {cap}")]
    DigitCapExceeded { digits: u64, cap: u64 },
    #[error("self-check failed: independent computations differ (|diff| = {difference})")]
    SelfCheckFailed { difference: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, EmiError>;
