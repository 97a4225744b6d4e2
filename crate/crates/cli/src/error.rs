use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pfractal::Error),

    #[error("{0}")]
    Usage(String),

    /// A well-formed request outside the domain of the command.
    #[error("{0}")]
    Domain(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed input file {path}: {source}")]
    Format {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl CliError {
    /// 1 usage or parse, 2 domain, 3 budget.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(pfractal::Error::Parse(_)) => 1,
            CliError::Core(pfractal::Error::Budget { .. }) => 3,
            CliError::Core(_) | CliError::Domain(_) => 2,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Format { .. } => 1,
        }
    }
}
