//! `symgauss gas`: run a Metropolis eigenvalue gas and export snapshots.
//!
//! Particles start on an evenly spaced interior layout of the predicted
//! limiting support, so burn-in only has to relax local fluctuations rather
//! than transport mass across the domain.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use symgauss_core::large_n::{master_field_q, master_field_sw, siegel_saddle_solve};
use symgauss_core::montecarlo::{coulomb_metropolis_with, GasConfig, GasState};
use symgauss_core::PotentialKind;

use crate::cache::Cache;
use crate::commands::{deliver, entropy_seed, parse_kind, Delivery, Normalized};
use crate::config::{pick, pick_required, ConfigFile};
use crate::manifest::RunManifest;
use crate::output::{json_bytes, sibling, snapshots_csv, GasSidecar};
use crate::{CliError, Result, EXIT_OK};

#[derive(Debug, Args)]
pub struct GasArgs {
    /// Confining potential: q, sw, or s
    #[arg(long)]
    pub kind: Option<String>,
    /// Number of particles
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling t of the ensemble
    #[arg(long)]
    pub t: Option<f64>,
    /// Dyson index of the log-repulsion term
    #[arg(long)]
    pub beta: Option<f64>,
    /// Number of sweeps (one attempted move per particle each)
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Initial proposal step (auto-tuned during burn-in)
    #[arg(long)]
    pub step: Option<f64>,
    /// RNG seed; pinning it makes the run cacheable
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fraction of sweeps discarded as burn-in
    #[arg(long)]
    pub burn_frac: Option<f64>,
    /// Record a snapshot every THIN post-burn sweeps
    #[arg(long)]
    pub thin: Option<usize>,
    /// Output path for the snapshot CSV (sidecar JSON sits next to it)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Interior evenly spaced layout on the predicted support.
fn initial_layout(kind: PotentialKind, t: f64, beta: f64, n: usize) -> Result<Vec<f64>> {
    let (a, b) = match kind {
        PotentialKind::Q => master_field_q(beta * t / 2.0)?.support(),
        PotentialKind::Sw => master_field_sw(beta * t / 2.0)?.support(),
        PotentialKind::S => siegel_saddle_solve(t, 16, 32)?.0.support(),
    };
    Ok((0..n)
        .map(|i| a + (b - a) * (i as f64 + 1.0) / (n as f64 + 1.0))
        .collect())
}

pub fn run(args: GasArgs, file: &ConfigFile, cache_dir: Option<PathBuf>) -> Result<i32> {
    let kind = parse_kind(&pick_required(args.kind, file.get_str("kind")?, "kind")?)?;
    let n = pick(args.n, file.get_usize("n")?, 64);
    let t = pick_required(args.t, file.get_f64("t")?, "t")?;
    let default_beta = if kind == PotentialKind::S { 1.0 } else { 2.0 };
    let beta = pick(args.beta, file.get_f64("beta")?, default_beta);
    let sweeps = pick(args.sweeps, file.get_usize("sweeps")?, 10_000);
    let step = pick(args.step, file.get_f64("step")?, 0.3);
    let seed_flag = args.seed.or(file.get_u64("seed")?);
    let burn_frac = pick(args.burn_frac, file.get_f64("burn_frac")?, 0.2);
    let thin = pick(args.thin, file.get_usize("thin")?, 1);
    let out = pick(args.out, file.get_path("out")?, PathBuf::from("gas.csv"));

    let seed_pinned = seed_flag.is_some();
    let seed = seed_flag.unwrap_or_else(entropy_seed);
    let cacheable = seed_pinned;

    let mut norm = Normalized::new();
    norm.put("kind", kind.label())
        .put("n", n)
        .put("t", t)
        .put("beta", beta)
        .put("sweeps", sweeps)
        .put("step", step)
        .put("seed", seed)
        .put("burn_frac", burn_frac)
        .put("thin", thin);
    let manifest = RunManifest::new("gas", norm.map(), Some(seed), BTreeMap::new());
    let hash = manifest.config_hash.clone();

    let cache = Cache::open(Cache::resolve_dir(
        cache_dir.or(file.get_path("cache_dir")?),
    ))?;
    let files = [
        Delivery {
            cache_name: "snapshots.csv",
            dest: out.clone(),
        },
        Delivery {
            cache_name: "sidecar.json",
            dest: sibling(&out, "json"),
        },
        Delivery {
            cache_name: "manifest.json",
            dest: sibling(&out, "manifest.json"),
        },
    ];

    let hash_for_artifact = hash.clone();
    let hit = deliver(&cache, &hash, cacheable, &files, move || {
        let initial = GasState::new(kind, initial_layout(kind, t, beta, n)?, t, beta)?;
        let cfg = GasConfig {
            sweeps,
            step,
            seed,
            burn_frac,
            thin_stride: thin,
            auto_tune: true,
        };
        let run = coulomb_metropolis_with(&initial, &cfg)?;

        let particle_rows: Vec<Vec<f64>> = run
            .snapshots
            .iter()
            .map(|s| s.particles.clone())
            .collect();
        let sidecar = GasSidecar {
            schema_version: crate::manifest::SCHEMA_VERSION,
            command: "gas",
            potential: kind.label().into(),
            n,
            t,
            beta,
            seed,
            seed_pinned,
            sweeps,
            burn_frac,
            thin,
            step_initial: step,
            step_tuned: run.step,
            acceptance: run.acceptance,
            snapshots: run.snapshots.len(),
            manifest_ref: hash_for_artifact,
        };
        Ok(vec![
            ("snapshots.csv", snapshots_csv(&particle_rows)),
            ("sidecar.json", json_bytes(&sidecar)?),
            ("manifest.json", manifest.to_json_bytes()),
        ])
    })?;

    if hit {
        eprintln!("cache hit {hash}");
    }
    let sidecar: serde_json::Value = serde_json::from_slice(&std::fs::read(sibling(&out, "json"))?)
        .map_err(|e| CliError::Failure(format!("sidecar unreadable after write: {e}")))?;
    println!(
        "{} gas: {} snapshots of {} particles, acceptance {}, step {} -> {}, {}",
        kind.label(),
        sidecar["snapshots"],
        n,
        sidecar["acceptance"],
        sidecar["step_initial"],
        sidecar["step_tuned"],
        out.display()
    );
    Ok(EXIT_OK)
}
