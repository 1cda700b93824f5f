use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },

    #[error("invalid grid: {0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] smoothjoin_core::Error),
}

impl CliError {
    /// 3 for geometric rejections, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_geometric_rejection() => 3,
            _ => 2,
        }
    }
}
