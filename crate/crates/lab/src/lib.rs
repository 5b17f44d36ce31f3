// SPDX-License-Identifier: Apache-2.0

//! File formats, certificate sidecars, parallel trial execution and the
//! `removal-lab` command line on top of `removal-lab-core`.

use std::path::{Path, PathBuf};

pub mod cert;
pub mod cli;
pub mod commands;
pub mod family;
pub mod format;
pub mod parallel;

pub use cli::run;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("format error: {0}")]
    Format(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] removal_lab_core::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl LabError {
    /// Process exit status: 1 for a failed verification, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Verification(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| LabError::Io {
        path: path.to_path_buf(),
        source,
    })
}
