//! Reproducibility manifest written alongside every run: the subcommand,
//! the full argument vector, seeds, and digests of the input files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub inputs: Vec<InputDigest>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: u64,
    /// FNV-1a 64-bit digest of the raw file contents, hex-encoded.
    pub fnv1a64: String,
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: Option<u64>, no_timestamp: bool) -> Self {
        let timestamp_unix = if no_timestamp {
            None
        } else {
            Some(
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            )
        };
        RunManifest {
            subcommand: subcommand.to_string(),
            argv: std::env::args().collect(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix,
            inputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            bytes: bytes.len() as u64,
            fnv1a64: format!("{:016x}", fnv1a64(&bytes)),
        });
        Ok(())
    }

    /// Writes to `path`, or to stderr when no path was chosen (keeps stdout
    /// reserved for data).
    pub fn write(&self, path: Option<&PathBuf>) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Data(format!("cannot serialize manifest: {e}")))?;
        match path {
            Some(p) => std::fs::write(p, json + "\n")
                .map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display())))?,
            None => eprintln!("{json}"),
        }
        Ok(())
    }
}

/// Default manifest path next to an output file: `<out>.manifest.json`.
pub fn sibling_manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}
