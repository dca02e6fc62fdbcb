use afmerge_core::{AfError, ApplyError, ConflictError, DatasetError, MergeError, RecipeError};
use serde_json::json;
use thiserror::Error;

/// Error surfaced by the CLI (as JSON on stderr) and the HTTP API.
#[derive(Debug, Error)]
pub enum ServiceError {
    /// Malformed input: unreadable files, bad recipes, CSV, APX, indices.
    #[error("{0}")]
    Invalid(String),
    /// Well-formed request that cannot be honoured in the current state.
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Io(String),
}

impl ServiceError {
    pub fn kind(&self) -> &'static str {
        match self {
            ServiceError::Invalid(_) => "invalid_input",
            ServiceError::Conflict(_) => "conflict",
            ServiceError::NotFound(_) => "not_found",
            ServiceError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}})
    }
}

impl From<RecipeError> for ServiceError {
    fn from(e: RecipeError) -> Self {
        ServiceError::Invalid(e.to_string())
    }
}

impl From<AfError> for ServiceError {
    fn from(e: AfError) -> Self {
        ServiceError::Invalid(e.to_string())
    }
}

impl From<ConflictError> for ServiceError {
    fn from(e: ConflictError) -> Self {
        ServiceError::Invalid(e.to_string())
    }
}

impl From<DatasetError> for ServiceError {
    fn from(e: DatasetError) -> Self {
        ServiceError::Invalid(e.to_string())
    }
}

impl From<MergeError> for ServiceError {
    fn from(e: MergeError) -> Self {
        ServiceError::Conflict(e.to_string())
    }
}

impl From<Box<ApplyError>> for ServiceError {
    fn from(e: Box<ApplyError>) -> Self {
        ServiceError::Conflict(e.to_string())
    }
}
