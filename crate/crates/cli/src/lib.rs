//! Command line and HTTP front-end over `afmerge-core`.

use std::path::Path;

pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod server;
pub mod session;

pub use config::{Config, Settings};
pub use engine::Analysis;
pub use error::ServiceError;
pub use session::{Session, SessionStore, SessionUpload};

/// Reads a UTF-8 file, mapping failures onto [`ServiceError`].
pub fn read_file(path: &Path) -> Result<String, ServiceError> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::InvalidData => ServiceError::Invalid(format!("{}: not UTF-8", path.display())),
        _ => ServiceError::Io(format!("{}: {e}", path.display())),
    })
}
