//! Library side of the `posterior-dynamics` command: scenario files, output
//! rendering, figure reproduction and the audit suites. The binary in
//! `main.rs` is a thin argument parser over these.

pub mod audit;
pub mod commands;
pub mod figures;
pub mod render;
pub mod scenario;
pub mod svg;

use posterior_dynamics::Error;

/// Failure classes, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed scenario or unknown suite name.
    #[error("{0}")]
    Schema(String),
    #[error("numeric failure: {0}")]
    Numeric(#[from] Error),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// An audit ran to completion and at least one check failed.
    #[error("{0} audit check(s) failed")]
    AuditFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::AuditFailed(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
