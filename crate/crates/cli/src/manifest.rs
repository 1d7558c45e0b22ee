//! Run manifests written next to every output dataset.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, exactly as given.
    pub argv: Vec<String>,
    pub seeds: Vec<u64>,
    pub version: String,
    /// SHA-256 of each input file at run time.
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 of each output file this run wrote.
    pub outputs: BTreeMap<String, String>,
    /// RFC 3339, UTC.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String], seeds: Vec<u64>) -> Self {
        Self {
            command: command.to_string(),
            argv: argv.to_vec(),
            seeds,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs
            .insert(path.display().to_string(), file_digest(path)?);
        Ok(())
    }

    pub fn output(&mut self, path: &Path) -> Result<()> {
        self.outputs
            .insert(path.display().to_string(), file_digest(path)?);
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("cannot write manifest {}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid manifest {}", path.display()))
    }
}

/// `data.csv` → `data.csv.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(digest(&bytes))
}
