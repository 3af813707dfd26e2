//! Run manifests: what was run, on which input, and which files it wrote.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::Regime;
use crate::error::Result;
use crate::io::write_json;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFile {
    /// Relative to the output directory.
    pub path: PathBuf,
    pub sha256: String,
}

/// Contains no timestamps or absolute paths, so identical runs give identical manifests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the input file bytes, or of the canonical config for sweeps.
    pub input_sha256: String,
    pub version: String,
    pub seed: Option<u64>,
    pub regime: Option<Regime>,
    pub outputs: Vec<OutputFile>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &str, input: &[u8]) -> Self {
        Self {
            command: command.to_string(),
            input_sha256: sha256_hex(input),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            regime: None,
            outputs: Vec::new(),
        }
    }

    /// Hashes `dir/name` and records it.
    pub fn record(&mut self, dir: &Path, name: &str) -> Result<()> {
        let bytes = fs::read(dir.join(name))?;
        self.outputs.push(OutputFile {
            path: PathBuf::from(name),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    /// Writes `manifest.json` into `dir`. The manifest does not list itself.
    pub fn write(&mut self, dir: &Path) -> Result<PathBuf> {
        self.outputs.sort_by(|a, b| a.path.cmp(&b.path));
        let path = dir.join(MANIFEST_FILE);
        write_json(&path, self)?;
        Ok(path)
    }

    /// Re-hashes every listed output; returns the paths whose contents changed.
    pub fn verify(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut changed = Vec::new();
        for out in &self.outputs {
            if sha256_hex(&fs::read(dir.join(&out.path))?) != out.sha256 {
                changed.push(out.path.clone());
            }
        }
        Ok(changed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_detects_changes() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("x.csv"), "a,b\n1,2\n").unwrap();
        let mut m = RunManifest::new("region", b"{}");
        m.record(dir.path(), "x.csv").unwrap();
        m.write(dir.path()).unwrap();
        let again: RunManifest = crate::io::read_json(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(again, m);
        assert!(m.verify(dir.path()).unwrap().is_empty());
        fs::write(dir.path().join("x.csv"), "a,b\n1,3\n").unwrap();
        assert_eq!(m.verify(dir.path()).unwrap(), vec![PathBuf::from("x.csv")]);
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
