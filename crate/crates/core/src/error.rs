use thiserror::Error;

/// Every failure the library can report.
///
/// Budget errors and validation errors are kept distinct because the CLI maps
/// them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("modulus {modulus} is reducible: {element} has no inverse")]
    ReducibleModulus { modulus: String, element: String },

    #[error("{element} is a zero divisor in {ring}")]
    ZeroDivisor { ring: String, element: String },

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("degree budget exceeded: need {needed}, budget is {budget}")]
    DegreeBudgetExceeded { needed: String, budget: u64 },

    #[error("tau-degree budget exceeded: need {needed}, budget is {budget}")]
    TauDegreeBudgetExceeded { needed: String, budget: u64 },

    #[error("orbit point {index} needs {bytes} bytes, budget is {budget}")]
    OrbitPointTooLarge { index: u64, bytes: usize, budget: u64 },

    #[error("polynomial is not additive: {0}")]
    NotAdditive(String),

    #[error("degree {degree} too small: {what} requires degree >= {min}")]
    DegreeTooSmall {
        what: &'static str,
        degree: String,
        min: u64,
    },

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undefined symbol '{symbol}' at {pos}")]
    UndefinedSymbol { symbol: char, pos: usize },

    #[error("x and T mixed in one expression (at {pos})")]
    MixedVariables { pos: usize },

    #[error("invalid value for '{field}': {msg}")]
    Validation { field: String, msg: String },
}

impl Error {
    pub fn validation(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            msg: msg.into(),
        }
    }

    pub fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::DegreeBudgetExceeded { .. }
                | Error::TauDegreeBudgetExceeded { .. }
                | Error::OrbitPointTooLarge { .. }
        )
    }

    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UndefinedSymbol { .. }
                | Error::MixedVariables { .. }
                | Error::Validation { .. }
                | Error::InvalidField(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
