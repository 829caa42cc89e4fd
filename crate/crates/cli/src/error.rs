use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}; pass --force to proceed")]
    Guard(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Guard(_) => 5,
        })
    }

    pub fn io(context: impl std::fmt::Display, err: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl From<hperc::BalanceError> for CliError {
    fn from(e: hperc::BalanceError) -> Self {
        match e {
            hperc::BalanceError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<hperc::TemplateError> for CliError {
    fn from(e: hperc::TemplateError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<hperc::threshold::EstimateError> for CliError {
    fn from(e: hperc::threshold::EstimateError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<hperc::experiments::ExperimentError> for CliError {
    fn from(e: hperc::experiments::ExperimentError) -> Self {
        CliError::Domain(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
