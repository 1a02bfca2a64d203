//! Artifact formats.
//!
//! JSON results and CSV tables. Numeric fields are written at full
//! round-trip precision (shortest representation that parses back to the
//! same double) and, where a human will read them, doubled with a rounded
//! `*_display` column. Every file carries `schema_version` and the
//! `manifest_ref` hash of its run manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;
use symgauss_core::large_n::SiegelSolveReport;
use symgauss_core::PrefactorConvention;

use crate::manifest::SCHEMA_VERSION;
use crate::Result;

pub fn display6(v: f64) -> String {
    format!("{v:.6}")
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| crate::CliError::Failure(format!("serialization: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// `out.csv` → `out.<ext>` (for the sidecar header and the manifest).
pub fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct PartitionArtifact {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub space: String,
    pub n: usize,
    pub sigma: f64,
    pub beta: f64,
    /// 't Hooft coupling Nσ².
    pub t: f64,
    pub method: String,
    pub log_value: f64,
    pub log_value_display: String,
    /// Bound for deterministic routes, standard error for stochastic ones,
    /// size of the first omitted correction for the asymptotic route.
    pub error_estimate: f64,
    /// Present only for the sampling route.
    pub std_error: Option<f64>,
    pub convention: PrefactorConvention,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub manifest_ref: String,
}

impl PartitionArtifact {
    pub fn schema() -> &'static str {
        SCHEMA_VERSION
    }
}

#[derive(Debug, Serialize)]
pub struct MasterfieldHeader {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub kind: String,
    /// Coupling of the requested ensemble.
    pub t: f64,
    pub beta: f64,
    /// Coupling at which the exported density lives (βt/2 for the cone
    /// families, t itself for the siegel family).
    pub t_effective: f64,
    pub support: [f64; 2],
    pub grid: usize,
    /// Worst saddle-equation residual over interior probes.
    pub residual: f64,
    pub residual_display: String,
    /// Collocation report when the density came from the siegel solver.
    pub solver: Option<SiegelSolveReport>,
    pub basis: Option<usize>,
    pub collocation: Option<usize>,
    pub manifest_ref: String,
}

#[derive(Debug, Serialize)]
pub struct GasSidecar {
    pub schema_version: &'static str,
    pub command: &'static str,
    /// Confining potential of the gas.
    pub potential: String,
    pub n: usize,
    pub t: f64,
    pub beta: f64,
    pub seed: u64,
    /// Whether the seed was supplied (pinned runs are cacheable).
    pub seed_pinned: bool,
    pub sweeps: usize,
    pub burn_frac: f64,
    pub thin: usize,
    pub step_initial: f64,
    pub step_tuned: f64,
    pub acceptance: f64,
    pub snapshots: usize,
    pub manifest_ref: String,
}

/// CSV with `lambda,rho` density samples plus rounded display columns.
pub fn density_csv(rows: &[(f64, f64)]) -> Vec<u8> {
    let mut text = String::from("lambda,rho,lambda_display,rho_display\n");
    for &(lambda, rho) in rows {
        text.push_str(&format!(
            "{lambda},{rho},{},{}\n",
            display6(lambda),
            display6(rho)
        ));
    }
    text.into_bytes()
}

/// CSV of gas snapshots in long form, one particle per row.
pub fn snapshots_csv(snapshots: &[Vec<f64>]) -> Vec<u8> {
    let mut text = String::from("snapshot,particle,lambda,lambda_display\n");
    for (s, particles) in snapshots.iter().enumerate() {
        for (p, &lambda) in particles.iter().enumerate() {
            text.push_str(&format!("{s},{p},{lambda},{}\n", display6(lambda)));
        }
    }
    text.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_keeps_full_precision_next_to_the_display_column() {
        let v = 0.1 + 0.2;
        let bytes = density_csv(&[(v, 1.0 / 3.0)]);
        let text = String::from_utf8(bytes).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "lambda,rho,lambda_display,rho_display");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0].parse::<f64>().unwrap().to_bits(), v.to_bits());
        assert_eq!(row[2], "0.300000");
        assert_eq!(row[3], "0.333333");
    }

    #[test]
    fn sibling_swaps_only_the_final_extension() {
        assert_eq!(
            sibling(Path::new("runs/field.csv"), "manifest.json"),
            Path::new("runs/field.manifest.json")
        );
        assert_eq!(
            sibling(Path::new("field.csv"), "json"),
            Path::new("field.json")
        );
    }
}
