use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate falsified: {0}")]
    Falsified(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidFan(_) => 2,
            Error::Precondition(_) => 3,
            Error::Falsified(_) => 4,
            Error::Internal(_) => 1,
        }
    }
}
