use std::path::PathBuf;

/// Errors of the driver, split by the exit code they map to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid configuration.
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Numerics(#[from] fraclt_core::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for usage problems, including hypotheses violated by the given
    /// parameters; 1 for failures of the computation itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Numerics(
                fraclt_core::Error::Domain(_) | fraclt_core::Error::WrongRegime(_) | fraclt_core::Error::Resource { .. },
            ) => 2,
            CliError::Numerics(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
