use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid drive: {0}")]
    InvalidDrive(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid deformation spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
