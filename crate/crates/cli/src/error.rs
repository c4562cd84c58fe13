use std::path::Path;

use basketmine::forecast::ForecastError;
use basketmine::freqmine::MineError;
use thiserror::Error;

/// Failure classes with distinct exit codes: bad flags or flag values exit
/// with 1, problems with the data being processed (unreadable files,
/// malformed rows, impossible requests) exit with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    /// Wraps an I/O error with the path it concerns.
    pub fn io(path: &Path, err: std::io::Error) -> CliError {
        CliError::Data(format!("{}: {err}", path.display()))
    }
}

impl From<MineError> for CliError {
    fn from(err: MineError) -> CliError {
        match err {
            // Parameter validation reflects flag values, not data.
            MineError::InvalidParams(_) => CliError::Usage(err.to_string()),
            _ => CliError::Data(err.to_string()),
        }
    }
}

impl From<ForecastError> for CliError {
    fn from(err: ForecastError) -> CliError {
        match err {
            ForecastError::InvalidConfig(_) | ForecastError::BadBaseline(_) => {
                CliError::Usage(err.to_string())
            }
            _ => CliError::Data(err.to_string()),
        }
    }
}

impl From<basketmine::datagen::GenError> for CliError {
    fn from(err: basketmine::datagen::GenError) -> CliError {
        CliError::Usage(err.to_string())
    }
}
