use thiserror::Error;

/// CLI failure, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}

impl From<gyroneedle_core::Error> for CliError {
    fn from(e: gyroneedle_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
