use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Provenance record written next to every command's outputs.
///
/// Captures everything needed to reproduce the run: the subcommand, the full
/// flag set (seed included where randomness is involved), a SHA-256 digest of
/// each input file, the produced files, and the toolkit version. Re-running
/// the same toolkit version with the recorded parameters over inputs matching
/// the recorded digests reproduces the outputs byte for byte.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl RunManifest {
    pub fn new(command: &str) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            params: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> RunManifest {
        let value = serde_json::to_value(value).expect("parameter values are plain data");
        self.params.insert(key.to_string(), value);
        self
    }

    /// Records an input file along with the SHA-256 digest of its bytes.
    pub fn input(mut self, path: &Path) -> Result<RunManifest, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        let digest = Sha256::digest(&bytes);
        let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256,
        });
        Ok(self)
    }

    pub fn output(mut self, path: &Path) -> RunManifest {
        self.outputs.push(path.display().to_string());
        self
    }

    /// Writes `<command>.manifest.json` into `dir` and returns its path.
    pub fn emit(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(format!("{}.manifest.json", self.command));
        let mut text =
            serde_json::to_string_pretty(self).expect("manifest serialization is infallible");
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
