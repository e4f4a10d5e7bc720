use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use segre_core::grid::SearchConfig;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

/// What was run, on which inputs, with which settings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<InputHash>,
    #[serde(default)]
    pub config: Option<SearchConfig>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Arguments read as exact rationals, with the text as given.
    #[serde(default)]
    pub exact: BTreeMap<String, String>,
    pub version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            inputs: Vec::new(),
            config: None,
            seed: None,
            exact: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    /// Reads a file and records its hash.
    pub fn read_input(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(InputHash { path: path.display().to_string(), sha256: hex(&Sha256::digest(&bytes)) });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn with_config(mut self, cfg: &SearchConfig) -> Self {
        self.seed = Some(cfg.seed);
        self.config = Some(cfg.clone());
        self
    }

    pub fn exact(&mut self, name: &str, text: &str) {
        self.exact.insert(name.to_string(), text.to_string());
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashes_are_lowercase_hex() {
        assert_eq!(hex(&Sha256::digest(b"")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn round_trips_through_json() {
        let m = RunManifest::new("classify").with_config(&SearchConfig::default());
        let back: RunManifest = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
