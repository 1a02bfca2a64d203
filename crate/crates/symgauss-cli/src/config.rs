//! Flat TOML configuration.
//!
//! One file, scalar `key = value` pairs only, shared by every subcommand;
//! each command reads the keys it understands and command-line flags always
//! win. Tables and arrays are rejected rather than merged: a nested value
//! would make it ambiguous which setting actually applied to a run, and the
//! provenance manifest hashes the resolved flat list.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::{CliError, Result};

/// Every key any subcommand understands. A single file may drive several
/// commands, so validation is against the union; a key outside it is a typo.
pub const KNOWN_KEYS: &[&str] = &[
    "basis",
    "beta",
    "burn_frac",
    "cache_dir",
    "collocation",
    "grid",
    "include_prefactor",
    "kind",
    "method",
    "n",
    "omega",
    "out",
    "report",
    "samples",
    "seed",
    "sigma",
    "space",
    "step",
    "suite",
    "sweeps",
    "t",
    "thin",
    "vol_un",
];

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, toml::Value>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let root: toml::Value = text
            .parse()
            .map_err(|e| CliError::Usage(format!("config is not valid TOML: {e}")))?;
        let table = match root {
            toml::Value::Table(t) => t,
            _ => return Err(CliError::Usage("config root must be a table".into())),
        };
        let mut values = BTreeMap::new();
        for (key, value) in table {
            match value {
                toml::Value::Table(_) | toml::Value::Array(_) | toml::Value::Datetime(_) => {
                    return Err(CliError::Usage(format!(
                        "config must be flat key = value pairs; '{key}' is not a scalar"
                    )));
                }
                scalar => {
                    if !KNOWN_KEYS.contains(&key.as_str()) {
                        return Err(CliError::Usage(format!(
                            "unknown config key '{key}'; known keys: {}",
                            KNOWN_KEYS.join(", ")
                        )));
                    }
                    values.insert(key, scalar);
                }
            }
        }
        Ok(ConfigFile { values })
    }

    fn get(&self, key: &str) -> Option<&toml::Value> {
        self.values.get(key)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(type_error(key, "a number", other)),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as usize)),
            Some(other) => Err(type_error(key, "a nonnegative integer", other)),
        }
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as u64)),
            Some(other) => Err(type_error(key, "a nonnegative integer", other)),
        }
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(v)) => Ok(Some(*v)),
            Some(other) => Err(type_error(key, "a boolean", other)),
        }
    }

    pub fn get_str(&self, key: &str) -> Result<Option<String>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::String(v)) => Ok(Some(v.clone())),
            Some(other) => Err(type_error(key, "a string", other)),
        }
    }

    pub fn get_path(&self, key: &str) -> Result<Option<PathBuf>> {
        Ok(self.get_str(key)?.map(PathBuf::from))
    }
}

fn type_error(key: &str, wanted: &str, got: &toml::Value) -> CliError {
    CliError::Usage(format!(
        "config key '{key}' must be {wanted}, got {}",
        got.type_str()
    ))
}

/// Flag value if given, else config value, else the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Flag value if given, else config value, else a usage error naming the
/// missing parameter.
pub fn pick_required<T>(flag: Option<T>, file: Option<T>, what: &str) -> Result<T> {
    flag.or(file).ok_or_else(|| {
        CliError::Usage(format!(
            "missing required parameter '{what}' (flag --{} or config key)",
            what.replace('_', "-")
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_scalars_and_coerces_integers() {
        let cfg = ConfigFile::parse("sigma = 0.5\nn = 8\nspace = \"pdc\"\nseed = 7\n").unwrap();
        assert_eq!(cfg.get_f64("sigma").unwrap(), Some(0.5));
        assert_eq!(cfg.get_f64("n").unwrap(), Some(8.0));
        assert_eq!(cfg.get_usize("n").unwrap(), Some(8));
        assert_eq!(cfg.get_str("space").unwrap().as_deref(), Some("pdc"));
        assert_eq!(cfg.get_u64("seed").unwrap(), Some(7));
        assert_eq!(cfg.get_f64("t").unwrap(), None);
    }

    #[test]
    fn rejects_nested_tables_unknown_keys_and_bad_types() {
        assert!(matches!(
            ConfigFile::parse("[section]\nsigma = 0.5\n"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            ConfigFile::parse("sigmma = 0.5\n"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            ConfigFile::parse("grid = [1, 2]\n"),
            Err(CliError::Usage(_))
        ));
        let cfg = ConfigFile::parse("sigma = \"half\"\n").unwrap();
        assert!(matches!(cfg.get_f64("sigma"), Err(CliError::Usage(_))));
    }

    #[test]
    fn flags_override_file_values() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick::<i32>(None, None, 3), 3);
        assert!(pick_required::<i32>(None, None, "sigma").is_err());
    }
}
