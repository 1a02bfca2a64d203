//! `symgauss partition`: one log-partition value by a chosen route.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use symgauss_core::finite_n::{
    direct_quadrature_logz, z1_finite, z2_closed_form, zs_finite, MAX_SKEW_N,
};
use symgauss_core::large_n::f_uni_closed;
use symgauss_core::montecarlo::mc_log_partition;
use symgauss_core::{
    ln_factorial, log_prefactor_reduced_to_full, EnsembleSpec, Method, PartitionResult,
    PrefactorConvention, Space,
};

use crate::cache::Cache;
use crate::commands::{deliver, entropy_seed, parse_space, Delivery, Normalized};
use crate::config::{pick, pick_required, ConfigFile};
use crate::manifest::RunManifest;
use crate::output::{display6, json_bytes, sibling, PartitionArtifact};
use crate::{CliError, Result, EXIT_OK};

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// Symmetric space: pdr, pdc, pdq, or siegel
    #[arg(long)]
    pub space: Option<String>,
    /// Matrix size N
    #[arg(long)]
    pub n: Option<usize>,
    /// Gaussian width σ
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Route: auto, closed, skew, mc, quad, or largen
    #[arg(long)]
    pub method: Option<String>,
    /// Sample count for the mc route
    #[arg(long)]
    pub samples: Option<usize>,
    /// RNG seed; pinning it makes a stochastic run cacheable
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid points per axis for the quad route
    #[arg(long)]
    pub grid: Option<usize>,
    /// Report log Z including the measure prefactor instead of the reduced
    /// integral
    #[arg(long)]
    pub include_prefactor: bool,
    /// Value of the ω constant when the prefactor is included
    #[arg(long)]
    pub omega: Option<f64>,
    /// Value of the vol U(N) constant when the prefactor is included
    #[arg(long)]
    pub vol_un: Option<f64>,
    /// Output path for the result JSON
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Closed,
    Skew,
    Mc,
    Quad,
    Largen,
}

impl Route {
    fn label(self) -> &'static str {
        match self {
            Route::Closed => "closed",
            Route::Skew => "skew",
            Route::Mc => "mc",
            Route::Quad => "quad",
            Route::Largen => "largen",
        }
    }
}

fn compatibility_matrix() -> String {
    [
        "  method  spaces            constraint",
        "  closed  pdc               any N",
        "  skew    pdr, siegel       even N <= 24",
        "  quad    all               N <= 4",
        "  mc      all               any N",
        "  largen  pdr, pdc, pdq     any N",
        "  auto    all               first of closed, skew, largen that applies",
    ]
    .join("\n")
}

fn incompatible(reason: String) -> CliError {
    CliError::Usage(format!("{reason}\n{}", compatibility_matrix()))
}

/// Picks the concrete route, or explains why the requested one cannot serve
/// this ensemble.
fn resolve_route(method: &str, space: Space, n: usize) -> Result<Route> {
    let skew_ok = matches!(space, Space::PdReal | Space::Siegel) && n % 2 == 0 && n <= MAX_SKEW_N;
    match method {
        "auto" => {
            if space == Space::PdComplex {
                Ok(Route::Closed)
            } else if skew_ok {
                Ok(Route::Skew)
            } else if space != Space::Siegel {
                Ok(Route::Largen)
            } else {
                Err(incompatible(format!(
                    "no automatic route for siegel with N = {n}; request quad (N <= 4) or mc explicitly"
                )))
            }
        }
        "closed" => {
            if space == Space::PdComplex {
                Ok(Route::Closed)
            } else {
                Err(incompatible(format!(
                    "the closed form exists only for pdc, not {}",
                    space.label()
                )))
            }
        }
        "skew" => {
            if skew_ok {
                Ok(Route::Skew)
            } else {
                Err(incompatible(format!(
                    "the skew route serves pdr and siegel at even N <= {MAX_SKEW_N}, not {} with N = {n}",
                    space.label()
                )))
            }
        }
        "mc" => Ok(Route::Mc),
        "quad" => {
            if n <= 4 {
                Ok(Route::Quad)
            } else {
                Err(incompatible(format!(
                    "direct quadrature is capped at N = 4 (cost grows as grid^N), got N = {n}"
                )))
            }
        }
        "largen" => {
            if space != Space::Siegel {
                Ok(Route::Largen)
            } else {
                Err(incompatible(
                    "the asymptotic route has a closed planar free energy only for the cone \
                     families; siegel needs the saddle solver (see masterfield --kind s)"
                        .into(),
                ))
            }
        }
        other => Err(incompatible(format!(
            "unknown method '{other}'; expected auto, closed, skew, mc, quad, or largen"
        ))),
    }
}

pub fn run(args: PartitionArgs, file: &ConfigFile, cache_dir: Option<PathBuf>) -> Result<i32> {
    let space = parse_space(&pick_required(
        args.space,
        file.get_str("space")?,
        "space",
    )?)?;
    let n = pick_required(args.n, file.get_usize("n")?, "n")?;
    let sigma = pick_required(args.sigma, file.get_f64("sigma")?, "sigma")?;
    let method = pick(args.method, file.get_str("method")?, "auto".into());
    let samples = pick(args.samples, file.get_usize("samples")?, 1_000_000);
    let seed_flag = args.seed.or(file.get_u64("seed")?);
    let grid = pick(args.grid, file.get_usize("grid")?, 128);
    let include_prefactor =
        args.include_prefactor || file.get_bool("include_prefactor")?.unwrap_or(false);
    let omega = pick(args.omega, file.get_f64("omega")?, 1.0);
    let vol_un = pick(args.vol_un, file.get_f64("vol_un")?, 1.0);
    let out = pick(args.out, file.get_path("out")?, PathBuf::from("partition.json"));

    let route = resolve_route(&method, space, n)?;
    let spec = EnsembleSpec::new(space, n, sigma)?;

    let seed_pinned = seed_flag.is_some();
    let seed_used = match route {
        Route::Mc => Some(seed_flag.unwrap_or_else(entropy_seed)),
        _ => None,
    };
    let cacheable = route != Route::Mc || seed_pinned;

    let mut norm = Normalized::new();
    norm.put("space", space.label())
        .put("n", n)
        .put("sigma", sigma)
        .put("method", route.label())
        .put("include_prefactor", include_prefactor);
    if include_prefactor {
        norm.put("omega", omega).put("vol_un", vol_un);
    }
    match route {
        Route::Quad => {
            norm.put("grid", grid);
        }
        Route::Mc => {
            norm.put("samples", samples);
            norm.put("seed", seed_used.expect("mc always seeds"));
        }
        _ => {}
    }

    let manifest = RunManifest::new("partition", norm.map(), seed_used, BTreeMap::new());
    let hash = manifest.config_hash.clone();

    let cache = Cache::open(Cache::resolve_dir(
        cache_dir.or(file.get_path("cache_dir")?),
    ))?;
    let files = [
        Delivery {
            cache_name: "result.json",
            dest: out.clone(),
        },
        Delivery {
            cache_name: "manifest.json",
            dest: sibling(&out, "manifest.json"),
        },
    ];

    let hash_for_artifact = hash.clone();
    let hit = deliver(&cache, &hash, cacheable, &files, move || {
        let reduced_conv = PrefactorConvention::default();
        let core: PartitionResult = match route {
            Route::Closed => z2_closed_form(n, sigma, &reduced_conv)?,
            Route::Skew => {
                if space == Space::Siegel {
                    zs_finite(n, sigma, &reduced_conv)?
                } else {
                    z1_finite(n, sigma, &reduced_conv)?
                }
            }
            Route::Quad => direct_quadrature_logz(&spec, grid)?,
            Route::Mc => {
                let est = mc_log_partition(&spec, samples, seed_used.expect("seeded"))?;
                if est.degenerate_proposal {
                    eprintln!(
                        "warning: effective sample size {:.0} of {}; the error bar is unreliable",
                        est.ess, est.n_samples
                    );
                }
                PartitionResult {
                    log_value: est.log_value,
                    method: Method::MonteCarlo,
                    error_estimate: est.std_error,
                    convention: reduced_conv,
                }
            }
            Route::Largen => {
                // Genus-zero leading order of the reduced value; the first
                // omitted terms are of the size recorded as the error.
                let nn = n as f64;
                let t_eff = spec.beta * spec.t() / 2.0;
                PartitionResult {
                    log_value: 0.5 * spec.beta * nn * nn * f_uni_closed(t_eff)?,
                    method: Method::LargeN,
                    error_estimate: nn * std::f64::consts::TAU.ln() + ln_factorial(n),
                    convention: reduced_conv,
                }
            }
        };

        let mut log_value = core.log_value;
        let mut convention = core.convention;
        if include_prefactor {
            let full = PrefactorConvention {
                omega_beta_n: omega,
                vol_un,
                include_prefactor: true,
            };
            log_value += log_prefactor_reduced_to_full(&spec, &full)?;
            convention = full;
        }

        let artifact = PartitionArtifact {
            schema_version: PartitionArtifact::schema(),
            command: "partition",
            space: space.label().into(),
            n,
            sigma,
            beta: spec.beta,
            t: spec.t(),
            method: core.method.label().into(),
            log_value,
            log_value_display: display6(log_value),
            error_estimate: core.error_estimate,
            std_error: (route == Route::Mc).then_some(core.error_estimate),
            convention,
            samples: (route == Route::Mc).then_some(samples),
            seed: seed_used,
            grid: (route == Route::Quad).then_some(grid),
            manifest_ref: hash_for_artifact,
        };
        Ok(vec![
            ("result.json", json_bytes(&artifact)?),
            ("manifest.json", manifest.to_json_bytes()),
        ])
    })?;

    if hit {
        eprintln!("cache hit {hash}");
    }

    let written: serde_json::Value = serde_json::from_slice(&std::fs::read(&out)?)
        .map_err(|e| CliError::Failure(format!("result unreadable after write: {e}")))?;
    println!(
        "log_value = {} (method {}, {})",
        written["log_value"],
        written["method"].as_str().unwrap_or("?"),
        out.display()
    );
    Ok(EXIT_OK)
}
