use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeisError};

/// One pair of activation dumps: `ref` holds f(x), `alt` holds f(T(x)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub label: String,
    #[serde(rename = "ref")]
    pub ref_path: PathBuf,
    #[serde(rename = "alt")]
    pub alt_path: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ManifestMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epoch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<String>,
}

/// Ordered list of layer dumps to score.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<ManifestMetadata>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        let manifest: Manifest =
            serde_json::from_str(text).map_err(|e| SeisError::Parse(format!("manifest: {e}")))?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.entries {
            if !seen.insert(e.label.as_str()) {
                return Err(SeisError::Validation(format!(
                    "duplicate manifest label {:?}",
                    e.label
                )));
            }
            if e.ref_path.as_os_str().is_empty() || e.alt_path.as_os_str().is_empty() {
                return Err(SeisError::Validation(format!(
                    "manifest entry {:?} has an empty path",
                    e.label
                )));
            }
        }
        Ok(())
    }

    /// Makes relative entry paths relative to `base` (normally the manifest's directory).
    pub fn resolve_against(&mut self, base: &Path) {
        for e in &mut self.entries {
            if e.ref_path.is_relative() {
                e.ref_path = base.join(&e.ref_path);
            }
            if e.alt_path.is_relative() {
                e.alt_path = base.join(&e.alt_path);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads a JSON manifest. Entry paths are returned exactly as written.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SeisError::io(path, e))?;
    Manifest::from_json(&text)
}
