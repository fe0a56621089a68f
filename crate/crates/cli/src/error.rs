use std::path::{Path, PathBuf};

use tgkit_core::{CorpusError, EvalError};
use thiserror::Error;

/// Errors are split by exit code: 1 for bad input, 2 for I/O failures.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Io { .. } => 2,
        }
    }

    pub fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn corpus(path: &Path, e: CorpusError) -> CliError {
        match e {
            CorpusError::Io(source) => CliError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => CliError::Input(format!("{}: {other}", path.display())),
        }
    }

    pub fn eval(e: EvalError) -> CliError {
        match e {
            EvalError::Io(source) => CliError::Io {
                path: PathBuf::new(),
                source,
            },
            other => CliError::Input(other.to_string()),
        }
    }
}
