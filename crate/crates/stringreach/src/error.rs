use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Rejected by the library: invalid field, zero state where one is
    /// required, and the like.
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
    /// Input that is not a well-formed document.
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Io(_) | CliError::Malformed(_) => 3,
        }
    }
}

impl From<stringreach_core::Error> for CliError {
    fn from(e: stringreach_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}
