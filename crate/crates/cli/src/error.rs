use std::path::PathBuf;

use serde::Serialize;

/// Input problems and domain errors. Property violations are not errors: they
/// are reported through [`crate::commands::Outcome`].
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Domain(#[from] czlab_core::Error),
    #[error("family exhausted: {rejected} of {attempts} draws rejected before {accepted} instances were accepted")]
    FamilyExhausted {
        accepted: usize,
        rejected: usize,
        attempts: usize,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io_error",
            CliError::Parse { .. } => "parse_error",
            CliError::Schema(_) => "schema_error",
            CliError::Domain(e) => e.code(),
            CliError::FamilyExhausted { .. } => "family_exhausted",
            CliError::Csv(_) => "csv_error",
            CliError::Json(_) => "json_error",
            CliError::Write(_) => "write_error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        2
    }

    pub fn to_report(&self) -> ErrorReport {
        ErrorReport {
            error: self.code(),
            message: self.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: &'static str,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;
