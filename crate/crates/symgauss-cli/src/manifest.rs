//! Provenance manifests.
//!
//! Every artifact the binary writes is accompanied by a `RunManifest` and
//! carries its `config_hash` as `manifest_ref`. The hash covers the command
//! name and the fully resolved parameter list (defaults filled in, keys
//! sorted), so the same effective request hashes identically whether it came
//! from flags, the config file, or both. The timestamp is deliberately
//! excluded from the hash: it records when a value was computed, not what
//! was computed.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Stamped into every output file this crate writes.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema_version: String,
    pub command: String,
    pub config_hash: String,
    /// RNG seed actually used; absent for deterministic commands.
    pub seed: Option<u64>,
    /// Numeric gates the run was held to, by name.
    pub tolerances: BTreeMap<String, f64>,
    /// Component versions that could change the numbers.
    pub versions: BTreeMap<String, String>,
    /// UTC, RFC 3339. Not part of `config_hash`.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(
        command: &str,
        params: &BTreeMap<String, String>,
        seed: Option<u64>,
        tolerances: BTreeMap<String, f64>,
    ) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("symgauss-cli".into(), env!("CARGO_PKG_VERSION").into());
        versions.insert("symgauss-core".into(), symgauss_core::VERSION.into());
        versions.insert("rng".into(), "rand_chacha-0.9.0".into());
        RunManifest {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            config_hash: config_hash(command, params),
            seed,
            tolerances,
            versions,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Micros, true),
        }
    }

    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("manifest serializes");
        bytes.push(b'\n');
        bytes
    }
}

/// SHA-256 over the command name and the sorted `key=value` lines.
pub fn config_hash(command: &str, params: &BTreeMap<String, String>) -> String {
    let mut hasher = Sha256::new();
    hasher.update(command.as_bytes());
    hasher.update(b"\n");
    for (key, value) in params {
        hasher.update(key.as_bytes());
        hasher.update(b"=");
        hasher.update(value.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn hash_ignores_insertion_order_but_not_values() {
        let a = params(&[("n", "8"), ("sigma", "0.25")]);
        let b = params(&[("sigma", "0.25"), ("n", "8")]);
        let c = params(&[("n", "8"), ("sigma", "0.5")]);
        assert_eq!(config_hash("partition", &a), config_hash("partition", &b));
        assert_ne!(config_hash("partition", &a), config_hash("partition", &c));
        assert_ne!(config_hash("partition", &a), config_hash("gas", &a));
    }

    #[test]
    fn manifest_serializes_with_stable_hash_and_fresh_timestamp() {
        let p = params(&[("t", "0.25")]);
        let m1 = RunManifest::new("masterfield", &p, None, BTreeMap::new());
        let m2 = RunManifest::new("masterfield", &p, None, BTreeMap::new());
        assert_eq!(m1.config_hash, m2.config_hash);
        let text = String::from_utf8(m1.to_json_bytes()).unwrap();
        assert!(text.contains("\"schema_version\": \"1\""));
        assert!(text.contains("symgauss-core"));
        assert!(text.ends_with('\n'));
    }
}
