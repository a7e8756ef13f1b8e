//! Artifact emission: every invocation writes into one output
//! directory, and a manifest JSON listing each artifact with its SHA-256
//! checksum is written last so the directory is self-describing.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

use crate::Failure;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
struct ManifestEntry {
    path: String,
    bytes: usize,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest {
    schema_version: u32,
    command: String,
    artifacts: Vec<ManifestEntry>,
}

/// Collects artifacts in memory and flushes them (plus the manifest)
/// in one pass, so a failed run leaves no partial directory behind.
pub struct OutputDir {
    root: PathBuf,
    command: String,
    entries: Vec<(String, Vec<u8>)>,
}

impl OutputDir {
    pub fn new(root: &Path, command: &str) -> Self {
        Self {
            root: root.to_path_buf(),
            command: command.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn add_text(&mut self, name: &str, content: String) {
        self.entries.push((name.to_string(), content.into_bytes()));
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| Failure::usage(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.add_text(name, text);
        Ok(())
    }

    /// Write all artifacts and the manifest; returns the manifest path.
    pub fn flush(self) -> Result<PathBuf, Failure> {
        std::fs::create_dir_all(&self.root).map_err(|e| {
            Failure::usage(format!(
                "cannot create output directory {}: {e}",
                self.root.display()
            ))
        })?;
        let mut artifacts = Vec::new();
        for (name, bytes) in &self.entries {
            let path = self.root.join(name);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)
                    .map_err(|e| Failure::usage(format!("cannot create {}: {e}", parent.display())))?;
            }
            std::fs::write(&path, bytes)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            let mut hasher = Sha256::new();
            hasher.update(bytes);
            let digest = hasher.finalize();
            let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect::<String>();
            artifacts.push(ManifestEntry {
                path: name.clone(),
                bytes: bytes.len(),
                sha256,
            });
        }
        artifacts.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            schema_version: SCHEMA_VERSION,
            command: self.command,
            artifacts,
        };
        let manifest_path = self.root.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Failure::usage(format!("cannot serialize manifest: {e}")))?;
        text.push('\n');
        std::fs::write(&manifest_path, text).map_err(|e| {
            Failure::usage(format!("cannot write {}: {e}", manifest_path.display()))
        })?;
        Ok(manifest_path)
    }
}
