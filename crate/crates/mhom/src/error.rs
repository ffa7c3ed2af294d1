pub type Result<T> = std::result::Result<T, Error>;

/// Errors that stop a job before any check runs. Check failures are not
/// errors; they are recorded in the report.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] mhom_core::Error),
}

impl Error {
    /// All of these are input or usage problems.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
