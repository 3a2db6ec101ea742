use thiserror::Error;

/// Every failure the engine reports.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An input violates a documented constraint.
    #[error("invalid input: {0}")]
    Domain(String),

    #[error("argument {re}{im:+}i lies on the branch cut [-1, 1]")]
    ArgumentOnCut { re: f64, im: f64 },

    #[error("overflow in {0}")]
    Overflow(String),

    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("lower parameter {0} is a non-positive integer")]
    Pole(f64),

    /// The imaginary residual of a result that must be real is too large.
    #[error("imaginary residual {residual:e} exceeds bound {bound:e} (value {value:e})")]
    RealityViolation { value: f64, residual: f64, bound: f64 },

    #[error("order {ell} exceeds the configured maximum {max}")]
    OrderLimit { ell: i64, max: i64 },

    #[error("unsupported k power: {0}")]
    UnsupportedPower(String),

    #[error("derivative order {d} exceeds the cap {max}")]
    DerivativeOrderLimit { d: usize, max: usize },

    #[error("cost limit: {0}")]
    CostLimit(String),

    /// The quadrature could not reach the requested tolerance.
    #[error("tolerance {requested:e} unreachable; best estimate {value:e} with error {achieved:e}")]
    ToleranceUnreachable { requested: f64, achieved: f64, value: f64 },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Whether the error reflects a numerical-quality failure rather than
    /// bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RealityViolation { .. }
                | Error::NonConvergence { .. }
                | Error::ToleranceUnreachable { .. }
                | Error::Overflow(_)
        )
    }
}
