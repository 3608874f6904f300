//! Provenance block embedded in every JSON output.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    /// Every flag after defaults are applied.
    pub flags: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub input_sha256: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            flags: BTreeMap::new(),
            seed: None,
            version: env!("CARGO_PKG_VERSION"),
            input_sha256: None,
        }
    }

    pub fn flag(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.flags.insert(name.to_string(), value.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn input(mut self, bytes: &[u8]) -> Self {
        self.input_sha256 = Some(sha256_hex(bytes));
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "flags": self.flags,
            "seed": self.seed,
            "version": self.version,
            "input_sha256": self.input_sha256,
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
