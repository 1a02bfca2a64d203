//! Subcommand implementations.
//!
//! Each command resolves its parameters (flags over config file over
//! defaults), normalizes them into the sorted list that the manifest hashes,
//! and hands the artifact bytes to [`deliver`], which owns the cache
//! round-trip: deterministic requests (and stochastic ones with a pinned
//! seed) are served stored bytes on a rerun, so identical requests produce
//! byte-identical files.

pub mod gas;
pub mod masterfield;
pub mod partition;
pub mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;

use symgauss_core::{PotentialKind, Space};

use crate::cache::Cache;
use crate::{CliError, Result};

pub fn parse_space(label: &str) -> Result<Space> {
    match label {
        "pdr" => Ok(Space::PdReal),
        "pdc" => Ok(Space::PdComplex),
        "pdq" => Ok(Space::PdQuaternion),
        "siegel" => Ok(Space::Siegel),
        other => Err(CliError::Usage(format!(
            "unknown space '{other}'; expected pdr, pdc, pdq, or siegel"
        ))),
    }
}

pub fn parse_kind(label: &str) -> Result<PotentialKind> {
    match label {
        "q" => Ok(PotentialKind::Q),
        "sw" => Ok(PotentialKind::Sw),
        "s" => Ok(PotentialKind::S),
        other => Err(CliError::Usage(format!(
            "unknown field kind '{other}'; expected q, sw, or s"
        ))),
    }
}

/// Seed for stochastic runs where the caller pinned nothing. Such runs are
/// not cached; the seed still lands in the manifest for the record.
pub fn entropy_seed() -> u64 {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    nanos ^ ((std::process::id() as u64) << 32)
}

/// Builder for the normalized parameter list behind the config hash.
#[derive(Debug, Default)]
pub struct Normalized {
    map: BTreeMap<String, String>,
}

impl Normalized {
    pub fn new() -> Self {
        Normalized::default()
    }

    pub fn put(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.map.insert(key.into(), value.to_string());
        self
    }

    pub fn map(&self) -> &BTreeMap<String, String> {
        &self.map
    }
}

/// One output file: its stable name inside the cache entry and where this
/// particular invocation wants it on disk.
pub struct Delivery {
    pub cache_name: &'static str,
    pub dest: PathBuf,
}

/// Serves the request from the cache when possible, otherwise computes,
/// writes, and (when cacheable) stores. Returns true on a cache hit.
pub fn deliver(
    cache: &Cache,
    hash: &str,
    cacheable: bool,
    files: &[Delivery],
    compute: impl FnOnce() -> Result<Vec<(&'static str, Vec<u8>)>>,
) -> Result<bool> {
    if cacheable {
        if let Some(stored) = cache.lookup(hash)? {
            let complete = files
                .iter()
                .all(|d| stored.iter().any(|(name, _)| name == d.cache_name));
            if complete {
                for d in files {
                    let bytes = &stored
                        .iter()
                        .find(|(name, _)| name == d.cache_name)
                        .expect("checked above")
                        .1;
                    crate::output::write_file(&d.dest, bytes)?;
                }
                return Ok(true);
            }
        }
    }
    let computed = compute()?;
    for d in files {
        let bytes = computed
            .iter()
            .find(|(name, _)| *name == d.cache_name)
            .map(|(_, b)| b)
            .ok_or_else(|| {
                CliError::Failure(format!("internal: artifact '{}' not produced", d.cache_name))
            })?;
        crate::output::write_file(&d.dest, bytes)?;
    }
    if cacheable {
        let named: Vec<(&str, &[u8])> = computed
            .iter()
            .map(|(name, bytes)| (*name, bytes.as_slice()))
            .collect();
        cache.store(hash, &named)?;
    }
    Ok(false)
}
