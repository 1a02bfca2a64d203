//! `symgauss masterfield`: export a limiting eigenvalue density.
//!
//! The cone families at Dyson index β and coupling t share the β = 2 master
//! field at the effective coupling βt/2, so that is where the exported
//! density lives; the siegel family has no index and is exported at t
//! itself, with the density coming from the collocation solver.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use symgauss_core::large_n::{
    master_field_q, master_field_sw, saddle_residual, siegel_saddle_solve, MasterField,
};
use symgauss_core::{Error as CoreError, PotentialKind};

use crate::cache::Cache;
use crate::commands::{deliver, parse_kind, Delivery, Normalized};
use crate::config::{pick, pick_required, ConfigFile};
use crate::manifest::RunManifest;
use crate::output::{density_csv, display6, json_bytes, sibling, MasterfieldHeader};
use crate::{CliError, Result, EXIT_OK};

#[derive(Debug, Args)]
pub struct MasterfieldArgs {
    /// Field family: q, sw, or s
    #[arg(long)]
    pub kind: Option<String>,
    /// Coupling t of the ensemble
    #[arg(long)]
    pub t: Option<f64>,
    /// Dyson index (q and sw only; the s family has none)
    #[arg(long)]
    pub beta: Option<f64>,
    /// Number of density samples across the support
    #[arg(long)]
    pub grid: Option<usize>,
    /// Chebyshev basis size for the s solver
    #[arg(long)]
    pub basis: Option<usize>,
    /// Collocation point count for the s solver
    #[arg(long)]
    pub collocation: Option<usize>,
    /// Output path for the density CSV (header JSON sits next to it)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: MasterfieldArgs, file: &ConfigFile, cache_dir: Option<PathBuf>) -> Result<i32> {
    let kind = parse_kind(&pick_required(args.kind, file.get_str("kind")?, "kind")?)?;
    let t = pick_required(args.t, file.get_f64("t")?, "t")?;
    let beta_flag = args.beta.or(file.get_f64("beta")?);
    let grid = pick(args.grid, file.get_usize("grid")?, 512);
    let basis = pick(args.basis, file.get_usize("basis")?, 16);
    let collocation = pick(args.collocation, file.get_usize("collocation")?, 32);
    let out = pick(args.out, file.get_path("out")?, PathBuf::from("masterfield.csv"));

    if grid < 2 {
        return Err(CliError::Usage(format!(
            "grid must be at least 2 density samples, got {grid}"
        )));
    }
    let beta = match kind {
        PotentialKind::S => {
            if let Some(b) = beta_flag {
                if b != 1.0 {
                    return Err(CliError::Usage(format!(
                        "the s family carries no Dyson index (its saddle equation is β-free); \
                         got --beta {b}, drop the flag or pass 1"
                    )));
                }
            }
            1.0
        }
        _ => {
            let b = beta_flag.unwrap_or(2.0);
            if !(b > 0.0 && b.is_finite()) {
                return Err(CliError::Usage(format!("β must be positive and finite, got {b}")));
            }
            b
        }
    };
    let t_eff = match kind {
        PotentialKind::S => t,
        _ => beta * t / 2.0,
    };

    let mut norm = Normalized::new();
    norm.put("kind", kind.label())
        .put("t", t)
        .put("beta", beta)
        .put("grid", grid);
    if kind == PotentialKind::S {
        norm.put("basis", basis).put("collocation", collocation);
    }
    let mut tolerances = BTreeMap::new();
    if kind == PotentialKind::S {
        tolerances.insert("mass_root".into(), 1e-12);
    }
    let manifest = RunManifest::new("masterfield", norm.map(), None, tolerances);
    let hash = manifest.config_hash.clone();

    let cache = Cache::open(Cache::resolve_dir(
        cache_dir.or(file.get_path("cache_dir")?),
    ))?;
    let files = [
        Delivery {
            cache_name: "density.csv",
            dest: out.clone(),
        },
        Delivery {
            cache_name: "header.json",
            dest: sibling(&out, "json"),
        },
        Delivery {
            cache_name: "manifest.json",
            dest: sibling(&out, "manifest.json"),
        },
    ];

    let hash_for_artifact = hash.clone();
    let hit = deliver(&cache, &hash, true, &files, move || {
        let (field, report): (MasterField, _) = match kind {
            PotentialKind::Q => (master_field_q(t_eff)?, None),
            PotentialKind::Sw => (master_field_sw(t_eff)?, None),
            PotentialKind::S => match siegel_saddle_solve(t, basis, collocation) {
                Ok((field, report)) => (field, Some(report)),
                Err(CoreError::NewtonFailure { residual_history }) => {
                    return Err(CliError::Failure(format!(
                        "siegel saddle solver did not converge; residual history: {residual_history:?}"
                    )));
                }
                Err(e) => return Err(e.into()),
            },
        };

        let (a, b) = field.support();
        // Midpoint grid: uniform spacing, strictly interior, so the sampled
        // density is finite even at the hard edge of the s family.
        let rows: Vec<(f64, f64)> = (0..grid)
            .map(|i| {
                let lambda = a + (b - a) * (i as f64 + 0.5) / grid as f64;
                (lambda, field.density(lambda))
            })
            .collect();

        // The self-consistency residual reported alongside the samples; for
        // q and sw the field solves its own-coupling equation at index 2.
        let probe_beta = if kind == PotentialKind::S { 1.0 } else { 2.0 };
        let probes: Vec<f64> = (0..5).map(|k| a + (b - a) * (0.1 + 0.2 * k as f64)).collect();
        let residual = saddle_residual(&field, probe_beta, &probes)?
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));

        let header = MasterfieldHeader {
            schema_version: crate::manifest::SCHEMA_VERSION,
            command: "masterfield",
            kind: kind.label().into(),
            t,
            beta,
            t_effective: t_eff,
            support: [a, b],
            grid,
            residual,
            residual_display: format!("{residual:.3e}"),
            solver: report,
            basis: (kind == PotentialKind::S).then_some(basis),
            collocation: (kind == PotentialKind::S).then_some(collocation),
            manifest_ref: hash_for_artifact,
        };
        Ok(vec![
            ("density.csv", density_csv(&rows)),
            ("header.json", json_bytes(&header)?),
            ("manifest.json", manifest.to_json_bytes()),
        ])
    })?;

    if hit {
        eprintln!("cache hit {hash}");
    }
    let header: serde_json::Value = serde_json::from_slice(&std::fs::read(sibling(&out, "json"))?)
        .map_err(|e| CliError::Failure(format!("header unreadable after write: {e}")))?;
    println!(
        "{} field at effective coupling {}: support [{}, {}], residual {}, {} samples in {}",
        kind.label(),
        header["t_effective"],
        display6(header["support"][0].as_f64().unwrap_or(f64::NAN)),
        display6(header["support"][1].as_f64().unwrap_or(f64::NAN)),
        header["residual_display"].as_str().unwrap_or("?"),
        grid,
        out.display()
    );
    Ok(EXIT_OK)
}
