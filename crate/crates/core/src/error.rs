use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for mode {mode} of size {size}")]
    OutOfRange { mode: usize, index: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("frequency slice {slice} is singular (sigma_min/sigma_max = {ratio:.3e})")]
    Singular { slice: usize, ratio: f64 },

    #[error("frequency slices {first} and {second} do not commute")]
    NotJointMtu { first: usize, second: usize },

    #[error("eigenvalue {value:.6e} (index {index}) of frequency slice {slice} is not positive")]
    NotPositiveDefinite { slice: usize, index: usize, value: f64 },

    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
