use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Domain(#[from] cellchan_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for bad input or an infeasible allocation, 2 for file-system trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Domain(_) => 1,
            CliError::Io { .. } => 2,
        }
    }
}
