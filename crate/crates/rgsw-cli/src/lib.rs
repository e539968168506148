//! Front-end plumbing for the `rgsw` binary: config schemas, bundled
//! experiment presets, outcome checks, and run manifests. The binary is a
//! thin dispatcher over this crate, so integration tests drive the same
//! code paths.

pub mod checks;
pub mod configs;
pub mod manifest;
pub mod presets;

use std::path::Path;

use serde::de::DeserializeOwned;

/// Errors surfaced on the terminal; the process exits with status 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Rg(#[from] rgsw::RgError),
    /// Config-file problems, with the parser's line and field information.
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Read and parse a JSON config, naming the file and the offending line
/// and field in the error message.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
