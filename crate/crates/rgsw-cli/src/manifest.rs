//! Run manifests record what an invocation did: the effective config, the
//! files written, and every check outcome.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliResult;

/// One pass/fail consistency or expected-outcome check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Written as `manifest.json` next to the outputs it lists.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// Crate version that produced the run.
    pub version: String,
    /// Subcommand and its positional argument.
    pub command: String,
    /// Effective config after flag overrides.
    pub config: serde_json::Value,
    pub wall_time_seconds: f64,
    /// Every file the invocation wrote, relative to the manifest.
    pub outputs: Vec<String>,
    pub checks: Vec<Check>,
}

/// Write through a sibling temporary file and rename, so readers never
/// observe a partial manifest.
pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> CliResult<PathBuf> {
    let path = dir.join("manifest.json");
    let tmp = dir.join("manifest.json.tmp");
    let mut body = serde_json::to_vec_pretty(manifest)?;
    body.push(b'\n');
    std::fs::write(&tmp, &body)?;
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}
