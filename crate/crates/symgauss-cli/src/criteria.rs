//! Cross-validation criteria.
//!
//! Eight independent agreements between routes that share no code path:
//! closed forms against quadrature, skew pivots against quadrature and
//! sampling, master fields against the force-balance equation they are
//! supposed to solve, the free energy against its convergence rate, gas
//! histograms against predicted densities, the siegel solver against its
//! own equation and a gas, the trilogarithm against series bounds, and
//! stochastic reruns against bit-identity.
//!
//! Every numeric gate lives here as a named constant; `symgauss verify` and
//! the acceptance test both call [`run_criterion`], so the command and the
//! test suite can never drift apart.

use serde::Serialize;
use symgauss_core::finite_n::{direct_quadrature_logz, z1_finite, z2_reduced_log, zs_finite};
use symgauss_core::large_n::{
    genus_deltas, master_field_q, master_field_sw, saddle_residual, siegel_saddle_solve,
    z2_asymptotic, zeta3, MasterField,
};
use symgauss_core::montecarlo::{
    coulomb_metropolis_with, ks_distance, mc_log_partition, GasConfig, GasState,
};
use symgauss_core::{EnsembleSpec, PotentialKind, PrefactorConvention, Space};

/// Relative gap between the closed form and direct quadrature.
pub const REL_CLOSED_QUAD: f64 = 1e-6;
/// Relative gap between a skew-pivot value and direct quadrature.
pub const REL_SKEW_QUAD: f64 = 1e-4;
/// Allowed pull |exact − estimate| / SE against the sampler.
pub const MC_PULL: f64 = 3.0;
/// Saddle residual gates for the semicircle and its sw deformation.
pub const RESID_Q: f64 = 1e-6;
pub const RESID_SW: f64 = 1e-5;
/// Window for successive free-energy gap ratios at doubling N (an exact
/// 1/N² rate gives 0.25).
pub const GENUS_RATIO_LO: f64 = 0.15;
pub const GENUS_RATIO_HI: f64 = 0.40;
/// KS gate between gas samples and the predicted cone densities.
pub const KS_GAS: f64 = 0.08;
/// Gates for the siegel solver: mass normalization, residual away from the
/// collocation points, and KS against an s-potential gas.
pub const SIEGEL_MASS: f64 = 1e-6;
pub const SIEGEL_RESID: f64 = 1e-4;
pub const KS_SIEGEL: f64 = 0.10;
/// Distance of the trilogarithm at 1 from the center of its series bracket.
pub const TRILOG_ABS: f64 = 1e-12;
/// Size of the surviving trilogarithm correction at coupling 20.
pub const TAIL_ABS: f64 = 1e-8;

/// Wall-clock budgets in seconds, indexed by criterion id.
pub const BUDGET_SECONDS: [f64; 9] = [0.0, 60.0, 600.0, 60.0, 300.0, 900.0, 900.0, 1.0, 900.0];

pub const CRITERION_IDS: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Suite names accepted by `symgauss verify`.
pub const SUITE_NAMES: [&str; 5] = ["oracles", "saddle", "universality", "convergence", "all"];

pub fn suite_ids(name: &str) -> Option<&'static [u8]> {
    match name {
        "oracles" => Some(&[1, 2, 7]),
        "saddle" => Some(&[3, 6]),
        "universality" => Some(&[5]),
        "convergence" => Some(&[4]),
        "all" => Some(&CRITERION_IDS),
        _ => None,
    }
}

// Pinned seeds. Stochastic gates are sharp only for a fixed stream; these
// runs were checked once and must reproduce bit-identically forever after.
const SEED_MC_PDR: [u64; 2] = [11, 12];
const SEED_MC_SIEGEL: [u64; 2] = [13, 14];
const SEED_GAS_Q: [u64; 3] = [201, 202, 203];
const SEED_GAS_SW: [u64; 3] = [211, 212, 213];
const SEED_GAS_S: [u64; 2] = [301, 302];

const GAS_N: usize = 64;
const GAS_SWEEPS: usize = 100_000;
const GAS_T: f64 = 0.25;
const S_GAS_SWEEPS: usize = 20_000;
const MC_SAMPLES: usize = 1_000_000;

type CoreResult<T> = core::result::Result<T, symgauss_core::Error>;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub bound: f64,
    pub within: bool,
}

impl Check {
    /// measured ≤ bound (NaN fails).
    fn le(label: impl Into<String>, measured: f64, bound: f64) -> Check {
        Check {
            label: label.into(),
            measured,
            bound,
            within: measured <= bound,
        }
    }

    fn band(label: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Check {
        Check {
            label: format!("{} in [{lo}, {hi}]", label.into()),
            measured,
            bound: hi,
            within: measured >= lo && measured <= hi,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub checks: Vec<Check>,
    /// Set when the criterion aborted instead of producing checks.
    pub failure: Option<String>,
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "closed form against direct quadrature",
        2 => "skew-pivot values against quadrature and sampling",
        3 => "master fields balance the force equation",
        4 => "free-energy gap shrinks at the inverse-square rate",
        5 => "gas samples match the predicted densities",
        6 => "siegel solver self-consistency",
        7 => "trilogarithm against series bounds",
        8 => "stochastic reruns are bit-identical",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u8) -> CriterionReport {
    let start = std::time::Instant::now();
    let outcome = match id {
        1 => closed_vs_quadrature(),
        2 => skew_vs_quadrature_and_mc(),
        3 => field_residuals(),
        4 => genus_rate(),
        5 => gas_universality(),
        6 => siegel_consistency(),
        7 => trilog_bounds(),
        8 => rerun_determinism(),
        other => Err(symgauss_core::Error::InvalidSpec(
            alloc_format(other),
        )),
    };
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(checks) => CriterionReport {
            id,
            name: criterion_name(id),
            passed: !checks.is_empty() && checks.iter().all(|c| c.within),
            seconds,
            checks,
            failure: None,
        },
        Err(e) => CriterionReport {
            id,
            name: criterion_name(id),
            passed: false,
            seconds,
            checks: Vec::new(),
            failure: Some(e.to_string()),
        },
    }
}

fn alloc_format(other: u8) -> String {
    format!("no criterion {other}; ids run 1 through 8")
}

fn rel_gap(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1e-300)
}

/// At β = 2 the reduced value has an exact finite product form; tensor
/// quadrature shares nothing with it but the integrand definition.
fn closed_vs_quadrature() -> CoreResult<Vec<Check>> {
    let mut checks = Vec::new();
    for n in [1usize, 2, 3] {
        for sigma in [0.25, 0.5, 1.0] {
            let spec = EnsembleSpec::new(Space::PdComplex, n, sigma)?;
            let quad = direct_quadrature_logz(&spec, 64 * n)?;
            let gap = rel_gap(quad.log_value, z2_reduced_log(n, sigma));
            checks.push(Check::le(
                format!("pdc N={n} sigma={sigma} quadrature gap"),
                gap,
                REL_CLOSED_QUAD,
            ));
        }
    }
    Ok(checks)
}

/// The skew route rests on extended-precision pivot recursions; quadrature
/// checks it exactly at N = 2 and the sampler statistically at N = 4.
fn skew_vs_quadrature_and_mc() -> CoreResult<Vec<Check>> {
    let reduced = PrefactorConvention::default();
    let mut checks = Vec::new();
    for (si, sigma) in [0.25, 0.5].into_iter().enumerate() {
        for space in [Space::PdReal, Space::Siegel] {
            let exact2 = match space {
                Space::Siegel => zs_finite(2, sigma, &reduced)?.log_value,
                _ => z1_finite(2, sigma, &reduced)?.log_value,
            };
            let spec2 = EnsembleSpec::new(space, 2, sigma)?;
            let quad = direct_quadrature_logz(&spec2, 512)?;
            checks.push(Check::le(
                format!("{} N=2 sigma={sigma} quadrature gap", space.label()),
                rel_gap(exact2, quad.log_value),
                REL_SKEW_QUAD,
            ));

            let exact4 = match space {
                Space::Siegel => zs_finite(4, sigma, &reduced)?.log_value,
                _ => z1_finite(4, sigma, &reduced)?.log_value,
            };
            let seed = match space {
                Space::Siegel => SEED_MC_SIEGEL[si],
                _ => SEED_MC_PDR[si],
            };
            let spec4 = EnsembleSpec::new(space, 4, sigma)?;
            let est = mc_log_partition(&spec4, MC_SAMPLES, seed)?;
            checks.push(Check::le(
                format!("{} N=4 sigma={sigma} sampler pull", space.label()),
                (exact4 - est.log_value).abs() / est.std_error,
                MC_PULL,
            ));
        }
    }
    Ok(checks)
}

fn interior_probes(field: &MasterField, count: usize, margin: f64) -> Vec<f64> {
    let (a, b) = field.support();
    (0..count)
        .map(|k| a + (b - a) * (margin + (1.0 - 2.0 * margin) * k as f64 / (count - 1) as f64))
        .collect()
}

fn max_abs_residual(field: &MasterField, beta: f64, margin: f64) -> CoreResult<f64> {
    let probes = interior_probes(field, 10, margin);
    let residuals = saddle_residual(field, beta, &probes)?;
    Ok(residuals.iter().fold(0.0f64, |m, r| m.max(r.abs())))
}

/// Each closed-form field must satisfy the singular integral equation it was
/// derived from, measured through an independent principal-value quadrature.
fn field_residuals() -> CoreResult<Vec<Check>> {
    let mut checks = Vec::new();
    for t in [0.1, 0.25, 1.0] {
        let q = master_field_q(t)?;
        checks.push(Check::le(
            format!("semicircle t={t} residual"),
            max_abs_residual(&q, 2.0, 0.06)?,
            RESID_Q,
        ));
        let sw = master_field_sw(t)?;
        checks.push(Check::le(
            format!("sw t={t} residual"),
            max_abs_residual(&sw, 2.0, 0.06)?,
            RESID_SW,
        ));
    }
    Ok(checks)
}

/// |(1/N²)·log Z̃₂ − f(t)| halves twice as N doubles.
fn genus_rate() -> CoreResult<Vec<Check>> {
    let mut checks = Vec::new();
    for t in [0.25, 1.0] {
        let deltas = genus_deltas(t, &[16, 32, 64])?;
        for k in 0..2 {
            checks.push(Check::band(
                format!("t={t} gap ratio N={}/{}", 32 << k, 16 << k),
                deltas[k + 1] / deltas[k],
                GENUS_RATIO_LO,
                GENUS_RATIO_HI,
            ));
        }
    }
    Ok(checks)
}

/// Runs a gas and returns its KS distance from the field plus an order-
/// and bit-exact digest of every recorded particle position.
fn gas_ks(
    kind: PotentialKind,
    beta: f64,
    t: f64,
    field: &MasterField,
    sweeps: usize,
    step: f64,
    seed: u64,
) -> CoreResult<(f64, u64)> {
    let (a, b) = field.support();
    let layout: Vec<f64> = (0..GAS_N)
        .map(|i| a + (b - a) * (i as f64 + 1.0) / (GAS_N as f64 + 1.0))
        .collect();
    let initial = GasState::new(kind, layout, t, beta)?;
    let mut cfg = GasConfig::new(sweeps, step, seed);
    cfg.thin_stride = 10;
    let run = coulomb_metropolis_with(&initial, &cfg)?;

    let mut digest: u64 = 0xcbf2_9ce4_8422_2325;
    let mut samples = Vec::new();
    for snap in &run.snapshots {
        for &x in &snap.particles {
            digest = (digest ^ x.to_bits()).wrapping_mul(0x0000_0100_0000_01b3);
            samples.push(x);
        }
    }
    let cdf = field.cdf_table(2048)?;
    Ok((ks_distance(&mut samples, |x| cdf.eval(x)), digest))
}

/// A gas at index β and coupling t must reproduce the index-2 field at the
/// effective coupling βt/2 for both cone potentials.
fn gas_universality() -> CoreResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (bi, beta) in [1.0, 2.0, 4.0].into_iter().enumerate() {
        let t_eff = beta * GAS_T / 2.0;
        let q_field = master_field_q(t_eff)?;
        let (ks_q, _) = gas_ks(
            PotentialKind::Q,
            beta,
            GAS_T,
            &q_field,
            GAS_SWEEPS,
            0.5,
            SEED_GAS_Q[bi],
        )?;
        checks.push(Check::le(
            format!("q gas beta={beta} KS distance"),
            ks_q,
            KS_GAS,
        ));

        let sw_field = master_field_sw(t_eff)?;
        let (ks_sw, _) = gas_ks(
            PotentialKind::Sw,
            beta,
            GAS_T,
            &sw_field,
            GAS_SWEEPS,
            0.3,
            SEED_GAS_SW[bi],
        )?;
        checks.push(Check::le(
            format!("sw gas beta={beta} KS distance"),
            ks_sw,
            KS_GAS,
        ));
    }
    Ok(checks)
}

/// The solved siegel density must be a genuine probability density, must
/// balance its equation away from the collocation points, must move its
/// edge monotonically toward 1 as t shrinks, and must match a gas.
fn siegel_consistency() -> CoreResult<Vec<Check>> {
    let mut checks = Vec::new();
    let mut edges = Vec::new();
    let (field_small, report_small) = siegel_saddle_solve(0.05, 16, 32)?;
    edges.push(report_small.b);
    drop(field_small);

    for (ti, t) in [0.1, 0.25].into_iter().enumerate() {
        let (field, report) = siegel_saddle_solve(t, 16, 32)?;
        edges.push(report.b);

        let (a, b) = field.support();
        let min_density = (0..512)
            .map(|i| field.density(a + (b - a) * (i as f64 + 0.5) / 512.0))
            .fold(f64::INFINITY, f64::min);
        checks.push(Check {
            label: format!("t={t} minimum density"),
            measured: min_density,
            bound: 0.0,
            within: min_density >= 0.0,
        });
        checks.push(Check::le(
            format!("t={t} mass defect"),
            report.mass_defect,
            SIEGEL_MASS,
        ));
        checks.push(Check::le(
            format!("t={t} off-collocation residual"),
            max_abs_residual(&field, 1.0, 0.05)?,
            SIEGEL_RESID,
        ));

        let (ks, _) = gas_ks(
            PotentialKind::S,
            1.0,
            t,
            &field,
            S_GAS_SWEEPS,
            0.3,
            SEED_GAS_S[ti],
        )?;
        checks.push(Check::le(format!("t={t} gas KS distance"), ks, KS_SIEGEL));
    }

    let shrink = (edges[1] - edges[0]).min(edges[2] - edges[1]);
    checks.push(Check {
        label: format!(
            "edge grows with t: b(0.05)={:.6}, b(0.1)={:.6}, b(0.25)={:.6}",
            edges[0], edges[1], edges[2]
        ),
        measured: shrink,
        bound: 0.0,
        within: shrink > 0.0 && edges[0] > 1.0,
    });
    // Small-t linear response: the support closes onto the hard edge like
    // 8t, so at t = 0.05 the width must sit near 0.4.
    checks.push(Check::band("b(0.05) - 1", edges[0] - 1.0, 0.3, 0.6));
    Ok(checks)
}

/// ζ(3) pinched between partial sums, and the exponentially small correction
/// to the asymptotic value at large coupling.
fn trilog_bounds() -> CoreResult<Vec<Check>> {
    let k = 1_000_000u64;
    let mut partial = 0.0;
    for i in (1..=k).rev() {
        let x = i as f64;
        partial += 1.0 / (x * x * x);
    }
    // Tail of Σ 1/k³ bracketed by ∫ x⁻³ over [K+1, ∞) and [K, ∞).
    let lo = partial + 0.5 / ((k + 1) as f64).powi(2);
    let hi = partial + 0.5 / (k as f64).powi(2);
    let mut checks = vec![Check::le(
        "zeta(3) distance from series bracket center",
        (zeta3() - 0.5 * (lo + hi)).abs(),
        TRILOG_ABS,
    )];

    let with_tail = z2_asymptotic(64, 20.0)?;
    let dropped = -0.5 * (128.0 / std::f64::consts::PI).ln() + 0.75 + 20.0 / 6.0
        + zeta3() / 400.0;
    checks.push(Check::le(
        "surviving trilog correction at t=20",
        (with_tail - dropped).abs(),
        TAIL_ABS,
    ));
    Ok(checks)
}

/// Every stochastic engine above, re-run on its pinned seed, must reproduce
/// its numbers to the bit.
fn rerun_determinism() -> CoreResult<Vec<Check>> {
    let mut checks = Vec::new();

    let spec = EnsembleSpec::new(Space::PdReal, 4, 0.5)?;
    let first = mc_log_partition(&spec, MC_SAMPLES, SEED_MC_PDR[1])?;
    let second = mc_log_partition(&spec, MC_SAMPLES, SEED_MC_PDR[1])?;
    let mc_diff = (first.log_value.to_bits() != second.log_value.to_bits()) as u64
        + (first.std_error.to_bits() != second.std_error.to_bits()) as u64;
    checks.push(Check::le(
        "sampler rerun differing fields",
        mc_diff as f64,
        0.0,
    ));

    let q_field = master_field_q(2.0 * GAS_T / 2.0)?;
    let (ks_a, dig_a) = gas_ks(
        PotentialKind::Q,
        2.0,
        GAS_T,
        &q_field,
        GAS_SWEEPS,
        0.5,
        SEED_GAS_Q[1],
    )?;
    let (ks_b, dig_b) = gas_ks(
        PotentialKind::Q,
        2.0,
        GAS_T,
        &q_field,
        GAS_SWEEPS,
        0.5,
        SEED_GAS_Q[1],
    )?;
    let gas_diff = (ks_a.to_bits() != ks_b.to_bits()) as u64 + (dig_a != dig_b) as u64;
    checks.push(Check::le(
        "cone gas rerun differing digests",
        gas_diff as f64,
        0.0,
    ));

    let (s_field, _) = siegel_saddle_solve(0.25, 16, 32)?;
    let (ks_c, dig_c) = gas_ks(
        PotentialKind::S,
        1.0,
        0.25,
        &s_field,
        S_GAS_SWEEPS,
        0.3,
        SEED_GAS_S[1],
    )?;
    let (s_field2, _) = siegel_saddle_solve(0.25, 16, 32)?;
    let (ks_d, dig_d) = gas_ks(
        PotentialKind::S,
        1.0,
        0.25,
        &s_field2,
        S_GAS_SWEEPS,
        0.3,
        SEED_GAS_S[1],
    )?;
    let s_diff = (ks_c.to_bits() != ks_d.to_bits()) as u64 + (dig_c != dig_d) as u64;
    checks.push(Check::le(
        "siegel gas rerun differing digests",
        s_diff as f64,
        0.0,
    ));

    Ok(checks)
}
