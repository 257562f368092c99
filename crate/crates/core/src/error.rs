use thiserror::Error;

/// Errors raised by the continued-fraction, summation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("partial quotient a_{requested} requested but the finite head only provides a_0..a_{last}; extend the head")]
    InsufficientQuotients { requested: usize, last: usize },

    #[error("invalid surd: {0}")]
    InvalidSurd(String),

    #[error("invalid partial quotients: {0}")]
    InvalidQuotients(String),

    #[error("cannot certify {what} from the available partial quotients; extend the head")]
    InsufficientPrecision { what: String },

    #[error("{value} is outside the computed numeration (must be below {limit})")]
    RangeExceeded { value: String, limit: String },

    #[error("index {index} out of range (continued fraction computed through index {last})")]
    IndexOutOfRange { index: usize, last: usize },

    #[error("reduced argument for m = {m} is exactly zero")]
    DegenerateDenominator { m: u64 },

    #[error("modulus q_{level} = {modulus} is too small for the exceptional-index analysis")]
    DegenerateModulus { level: usize, modulus: u64 },

    #[error("argument {0} outside the domain (0, 1/2]")]
    Domain(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("work of {work} units exceeds the budget of {budget}")]
    BudgetExceeded { work: u128, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable code used in JSON output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InsufficientQuotients { .. } => "insufficient_quotients",
            Error::InvalidSurd(_) => "invalid_surd",
            Error::InvalidQuotients(_) => "invalid_quotients",
            Error::InsufficientPrecision { .. } => "insufficient_precision",
            Error::RangeExceeded { .. } => "range_exceeded",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::DegenerateDenominator { .. } => "degenerate_denominator",
            Error::DegenerateModulus { .. } => "degenerate_modulus",
            Error::Domain(_) => "domain_error",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::BudgetExceeded { .. } => "budget_exceeded",
        }
    }

    pub(crate) fn precision(what: impl Into<String>) -> Self {
        Error::InsufficientPrecision { what: what.into() }
    }
}
