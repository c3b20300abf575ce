use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the supported domain")]
    Domain { what: &'static str, value: f64 },

    #[error("fractional order must lie in (0, 1), got {0}")]
    InvalidOrder(f64),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what}: series did not converge within {terms} terms at z = {z}")]
    SeriesConvergence { what: &'static str, z: f64, terms: usize },

    #[error("quadrature did not reach tolerance {tolerance:e}: achieved error estimate {estimate:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("objective has no interior minimum on [{lo}, {hi}]")]
    NoInteriorMinimum { lo: f64, hi: f64 },
}
