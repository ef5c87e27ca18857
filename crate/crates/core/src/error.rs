use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// Input violates a structural invariant (Hermiticity, positivity, unitarity, ...).
    #[error("validation failed: {0}")]
    Validation(String),
    /// Parameter outside the documented domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),
    /// A numerical post-condition could not be met.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
