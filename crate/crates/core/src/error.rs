use thiserror::Error;

/// Errors raised by the numerical kernels and the density/ICA layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: worst subinterval [{lo}, {hi}] has error estimate {error:e} (total {total_error:e})")]
    NonConvergence {
        lo: f64,
        hi: f64,
        error: f64,
        total_error: f64,
    },

    #[error("root is not bracketed: g({lo}) = {g_lo}, g({hi}) = {g_hi}")]
    Unbracketed {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular or rank deficient: {0}")]
    Singular(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
