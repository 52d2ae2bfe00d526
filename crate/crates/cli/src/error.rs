use thiserror::Error;

/// Every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] tubal::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io(..) => "io-error",
            CliError::Data(_) => "data-error",
            CliError::Usage(_) => "usage-error",
            CliError::Library(_) => "library-error",
        }
    }
}
