use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] uqsd_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("encoding run record: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 validation, 3 infeasible geometry, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(uqsd_core::Error::InfeasibleGeometry { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Json(_) => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
