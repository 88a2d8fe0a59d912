use thiserror::Error;
use trajectory_oracle::scenario::DocumentError;
use trajectory_oracle::{CaseTag, ReconstructError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("insufficient observations for case {case}: missing {}", missing.join("; "))]
    Insufficient { case: CaseTag, missing: Vec<String> },
    #[error("containment failure: {0}")]
    Containment(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Insufficient { .. } => 4,
            CliError::Containment(_) => 5,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Io { .. } => CliError::Io(e.to_string()),
            DocumentError::Parse(p) => CliError::Parse(p.to_string()),
            DocumentError::Invariant(m) => CliError::Invariant(m),
        }
    }
}

impl From<ReconstructError> for CliError {
    fn from(e: ReconstructError) -> Self {
        CliError::Invariant(e.to_string())
    }
}
