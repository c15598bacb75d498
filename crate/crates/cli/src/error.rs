use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tcsim_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("workspace {} is locked by another command (remove the lock file if it is stale)", .0.display())]
    Locked(PathBuf),

    #[error("{what} not found in the workspace; run `{hint}` first")]
    MissingArtifact { what: String, hint: String },

    #[error("{what} was built under a different configuration; run `{hint}` again")]
    Stale { what: String, hint: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Usage(_) => "E_USAGE",
            CliError::Locked(_) => "E_LOCKED",
            CliError::MissingArtifact { .. } => "E_MISSING_ARTIFACT",
            CliError::Stale { .. } => "E_STALE",
            CliError::Io { .. } => "E_IO",
            CliError::Json { .. } => "E_PARSE",
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn missing(what: impl Into<String>, hint: impl Into<String>) -> Self {
        CliError::MissingArtifact {
            what: what.into(),
            hint: hint.into(),
        }
    }
}
