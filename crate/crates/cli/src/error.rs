use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl From<radiant_core::Error> for CliError {
    fn from(e: radiant_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Process outcome after output has been written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Tolerance,
    Conservation,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Tolerance => 3,
            Status::Conservation => 4,
        }
    }
}
