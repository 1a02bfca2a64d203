//! Metropolis sampling of the eigenvalue Coulomb gas.
//!
//! The chain targets the density ∝ exp(−N Σ_i V(λ_i; √t) + β Σ_{i<j}
//! log|λ_i − λ_j|), which is the N²-scaled effective potential of the
//! ensemble with 't Hooft parameter t. At large N the particle histogram
//! concentrates on the equilibrium measure, which is how the sampled gas
//! cross-checks the analytic master fields.
//!
//! Moves are single-particle. On ℝ (Q) the proposal is an additive Gaussian
//! step; on (0, ∞) (SW) and (1, ∞) (S, shifted by the domain edge) the step
//! is taken in log scale, which keeps proposals in-domain structurally and
//! contributes the usual multiplicative Hastings correction.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fm;
use crate::montecarlo::rng::Stream;
use crate::potential::{Potential, PotentialKind};
use crate::vandermonde::log_vandermonde;

/// A gas configuration: particle positions plus the ensemble parameters that
/// define its stationary density.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GasState {
    pub kind: PotentialKind,
    pub particles: Vec<f64>,
    /// 't Hooft parameter t = Nσ².
    pub t: f64,
    pub beta: f64,
}

impl GasState {
    pub fn new(kind: PotentialKind, particles: Vec<f64>, t: f64, beta: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidSpec("gas needs finite positive t and β".into()));
        }
        if particles.len() < 2 {
            return Err(Error::InvalidSpec("gas needs at least two particles".into()));
        }
        for &x in &particles {
            if !interior(kind, x) {
                return Err(Error::Domain("gas particle outside the open domain"));
            }
        }
        let mut sorted = particles.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("coincident gas particles"));
        }
        Ok(GasState {
            kind,
            particles,
            t,
            beta,
        })
    }

    /// log of the (unnormalized) stationary density.
    pub fn log_target(&self) -> f64 {
        log_target_at(self.kind, self.t, self.beta, &self.particles)
    }
}

pub(crate) fn log_target_at(kind: PotentialKind, t: f64, beta: f64, particles: &[f64]) -> f64 {
    let pot = Potential::new(kind);
    let sigma = fm::sqrt(t);
    let n = particles.len() as f64;
    let mut confinement = 0.0;
    for &x in particles {
        match pot.eval(x, sigma) {
            Ok(v) => confinement += v,
            Err(_) => return f64::NEG_INFINITY,
        }
    }
    -n * confinement + log_vandermonde(particles, beta)
}

fn interior(kind: PotentialKind, x: f64) -> bool {
    x.is_finite()
        && match kind {
            PotentialKind::Sw => x > 0.0,
            PotentialKind::S => x > 1.0,
            PotentialKind::Q => true,
        }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GasConfig {
    /// Number of sweeps; each sweep attempts one move per particle.
    pub sweeps: usize,
    /// Initial proposal scale (tuned during burn-in unless `auto_tune` is
    /// off).
    pub step: f64,
    pub seed: u64,
    /// Fraction of sweeps discarded as burn-in.
    pub burn_frac: f64,
    /// A snapshot is recorded every `thin_stride` post-burn sweeps.
    pub thin_stride: usize,
    pub auto_tune: bool,
}

impl GasConfig {
    pub fn new(sweeps: usize, step: f64, seed: u64) -> Self {
        GasConfig {
            sweeps,
            step,
            seed,
            burn_frac: 0.2,
            thin_stride: 1,
            auto_tune: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sweeps < 10 {
            return Err(Error::InvalidSpec("need at least 10 sweeps".into()));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidSpec("step must be positive and finite".into()));
        }
        if !(0.0..1.0).contains(&self.burn_frac) {
            return Err(Error::InvalidSpec("burn fraction must lie in [0, 1)".into()));
        }
        if self.thin_stride == 0 {
            return Err(Error::InvalidSpec("thinning stride must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GasRun {
    pub snapshots: Vec<GasState>,
    /// Post-burn acceptance rate.
    pub acceptance: f64,
    /// Proposal scale in force after tuning.
    pub step: f64,
}

/// Post-tuning acceptance window; outside it the proposal scale is judged
/// useless and the run is rejected rather than silently returned.
const ACCEPTANCE_BAND: (f64, f64) = (0.1, 0.7);
const TUNE_BLOCK_SWEEPS: usize = 25;

/// Runs the Metropolis gas with default burn-in (20%), per-sweep thinning and
/// step auto-tuning.
pub fn coulomb_metropolis(
    initial: &GasState,
    sweeps: usize,
    step: f64,
    seed: u64,
) -> Result<GasRun> {
    coulomb_metropolis_with(initial, &GasConfig::new(sweeps, step, seed))
}

pub fn coulomb_metropolis_with(initial: &GasState, cfg: &GasConfig) -> Result<GasRun> {
    cfg.validate()?;
    // re-validate defensively: the state is public and may have been edited
    let state = GasState::new(initial.kind, initial.particles.clone(), initial.t, initial.beta)?;
    let n = state.particles.len();
    let pot = Potential::new(state.kind);
    let sigma = fm::sqrt(state.t);
    let n_f = n as f64;

    let mut stream = Stream::new(cfg.seed);
    let mut particles = state.particles;
    let mut step = cfg.step;

    let burn_sweeps = (cfg.sweeps as f64 * cfg.burn_frac) as usize;
    let tune_until = if cfg.auto_tune { burn_sweeps / 2 } else { 0 };

    let mut snapshots = Vec::new();
    let mut kept_accepts = 0usize;
    let mut kept_moves = 0usize;
    let mut block_accepts = 0usize;
    let mut block_moves = 0usize;

    for sweep in 0..cfg.sweeps {
        for i in 0..n {
            let old = particles[i];
            let z = stream.normal();
            // log-space moves on the multiplicative domains; the Hastings
            // correction for them is exactly step·z
            let (new, ln_corr) = match state.kind {
                PotentialKind::Q => (old + step * z, 0.0),
                PotentialKind::Sw => (old * fm::exp(step * z), step * z),
                PotentialKind::S => (1.0 + (old - 1.0) * fm::exp(step * z), step * z),
            };
            if sweep >= burn_sweeps {
                kept_moves += 1;
            }
            block_moves += 1;
            if !interior(state.kind, new) {
                continue;
            }
            let mut delta = -n_f
                * (pot.eval(new, sigma).map_or(f64::INFINITY, |v| v)
                    - pot.eval(old, sigma).unwrap_or(0.0));
            for (j, &other) in particles.iter().enumerate() {
                if j == i {
                    continue;
                }
                let dn = new - other;
                if dn == 0.0 {
                    delta = f64::NEG_INFINITY;
                    break;
                }
                delta += state.beta * (fm::ln_abs(dn) - fm::ln_abs(old - other));
            }
            let ln_alpha = delta + ln_corr;
            if ln_alpha == f64::NEG_INFINITY {
                continue;
            }
            if ln_alpha >= 0.0 || fm::ln(stream.uniform()) <= ln_alpha {
                particles[i] = new;
                if sweep >= burn_sweeps {
                    kept_accepts += 1;
                }
                block_accepts += 1;
            }
        }

        if cfg.auto_tune && sweep < tune_until && (sweep + 1) % TUNE_BLOCK_SWEEPS == 0 {
            let rate = block_accepts as f64 / block_moves as f64;
            if rate > 0.45 {
                step *= 1.25;
            } else if rate < 0.25 {
                step /= 1.25;
            }
            block_accepts = 0;
            block_moves = 0;
        }

        if sweep >= burn_sweeps && (sweep - burn_sweeps) % cfg.thin_stride == 0 {
            snapshots.push(GasState {
                kind: state.kind,
                particles: particles.clone(),
                t: state.t,
                beta: state.beta,
            });
        }
    }

    let acceptance = if kept_moves == 0 {
        0.0
    } else {
        kept_accepts as f64 / kept_moves as f64
    };
    if acceptance < ACCEPTANCE_BAND.0 || acceptance > ACCEPTANCE_BAND.1 {
        return Err(Error::TuningFailure { acceptance });
    }
    Ok(GasRun {
        snapshots,
        acceptance,
        step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::histogram::ks_distance;
    use alloc::vec;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
            .collect()
    }

    /// CDF of the semicircle of radius 2.
    fn semicircle_cdf(x: f64) -> f64 {
        if x <= -2.0 {
            0.0
        } else if x >= 2.0 {
            1.0
        } else {
            0.5 + (x * fm::sqrt(4.0 - x * x) + 4.0 * fm::asin(0.5 * x)) / (4.0 * fm::PI)
        }
    }

    #[test]
    fn state_invariants_are_enforced() {
        assert!(GasState::new(PotentialKind::Sw, vec![1.0], 1.0, 2.0).is_err());
        assert!(GasState::new(PotentialKind::Sw, vec![1.0, 1.0], 1.0, 2.0).is_err());
        assert!(GasState::new(PotentialKind::Sw, vec![-1.0, 2.0], 1.0, 2.0).is_err());
        assert!(GasState::new(PotentialKind::S, vec![1.0, 2.0], 1.0, 1.0).is_err());
        assert!(GasState::new(PotentialKind::Q, vec![0.0, 1.0], 0.0, 2.0).is_err());
        assert!(GasState::new(PotentialKind::Q, vec![0.0, 1.0], 1.0, 2.0).is_ok());
    }

    #[test]
    fn detailed_balance_on_a_discretized_two_particle_toy() {
        // two SW particles restricted to a 6-point grid; proposals pick a
        // particle and a fresh grid point uniformly (symmetric), acceptance
        // is the Metropolis rule on the production log target. Stationarity
        // plus reversibility means the flow matrix π_a P(a→b) is symmetric.
        let grid = [0.6, 0.9, 1.3, 1.9, 2.6, 3.4];
        let g = grid.len();
        let mut states = Vec::new();
        for a in 0..g {
            for b in 0..g {
                if a != b {
                    states.push((a, b));
                }
            }
        }
        let log_pi: Vec<f64> = states
            .iter()
            .map(|&(a, b)| log_target_at(PotentialKind::Sw, 0.5, 1.0, &[grid[a], grid[b]]))
            .collect();
        let idx = |a: usize, b: usize| states.iter().position(|&s| s == (a, b)).unwrap();
        let n_states = states.len();
        let mut flow = vec![vec![0.0f64; n_states]; n_states];
        for (s, &(a, b)) in states.iter().enumerate() {
            let pi_s = fm::exp(log_pi[s]);
            // move the first or second particle to any other grid point
            for target in 0..g {
                for which in 0..2 {
                    let (na, nb) = if which == 0 { (target, b) } else { (a, target) };
                    if (na, nb) == (a, b) || na == nb {
                        continue;
                    }
                    let s2 = idx(na, nb);
                    let accept = fm::exp((log_pi[s2] - log_pi[s]).min(0.0));
                    flow[s][s2] += pi_s * accept / (2.0 * (g - 1) as f64);
                }
            }
        }
        let scale = flow
            .iter()
            .flatten()
            .fold(0.0f64, |m, &x| m.max(x));
        for s in 0..n_states {
            for s2 in 0..n_states {
                assert!(
                    (flow[s][s2] - flow[s2][s]).abs() <= 1e-12 * scale,
                    "flow asymmetry between {s} and {s2}"
                );
            }
        }
    }

    #[test]
    fn q_gas_reproduces_the_semicircle() {
        let init = GasState::new(PotentialKind::Q, linspace(-1.8, 1.8, 64), 1.0, 2.0).unwrap();
        let run = coulomb_metropolis(&init, 20_000, 0.5, 1234).unwrap();
        assert!(run.snapshots.len() >= 100);
        let mut pooled: Vec<f64> = run
            .snapshots
            .iter()
            .flat_map(|s| s.particles.iter().copied())
            .collect();
        let d = ks_distance(&mut pooled, semicircle_cdf);
        assert!(d < 0.08, "KS distance {d}");
    }

    #[test]
    fn sw_gas_stays_inside_the_predicted_support() {
        // support endpoints of the equilibrium measure at t_eff = βt/2 = t
        let t: f64 = 0.25;
        let et = fm::exp(t);
        let spread = 2.0 * fm::exp(1.5 * t) * fm::sqrt(et - 1.0);
        let center = 2.0 * fm::exp(2.0 * t) - et;
        let (lo, hi) = (0.95 * (center - spread), 1.05 * (center + spread));
        // edge excursions shrink like N^{−2/3}; N = 64 still pokes ~1% past
        // the band, N = 128 sits inside it
        let init = GasState::new(PotentialKind::Sw, linspace(0.8, 2.8, 128), t, 2.0).unwrap();
        let run = coulomb_metropolis(&init, 8_000, 0.3, 77).unwrap();
        let mut worst_lo = f64::INFINITY;
        let mut worst_hi = f64::NEG_INFINITY;
        for snap in &run.snapshots {
            for &x in &snap.particles {
                worst_lo = worst_lo.min(x);
                worst_hi = worst_hi.max(x);
            }
        }
        assert!(
            worst_lo >= lo && worst_hi <= hi,
            "observed [{worst_lo}, {worst_hi}] vs allowed [{lo}, {hi}]"
        );
    }

    #[test]
    fn particles_never_collide_even_under_weak_confinement() {
        // at t = 100 the walk is nearly free, so the proposal must be wide
        // for rejections (and the acceptance band) to mean anything
        let init = GasState::new(PotentialKind::Sw, vec![0.5, 2.0], 100.0, 1.0).unwrap();
        let run = coulomb_metropolis(&init, 2_000, 12.0, 5).unwrap();
        assert!(run.acceptance > 0.0);
        for snap in &run.snapshots {
            assert!(snap.particles[0] != snap.particles[1]);
        }
    }

    #[test]
    fn hopeless_step_reports_tuning_failure() {
        let init = GasState::new(PotentialKind::Q, linspace(-1.0, 1.0, 8), 1.0, 2.0).unwrap();
        let mut cfg = GasConfig::new(1_000, 1e6, 3);
        cfg.auto_tune = false;
        assert!(matches!(
            coulomb_metropolis_with(&init, &cfg),
            Err(Error::TuningFailure { .. })
        ));
    }

    #[test]
    fn runs_are_seed_deterministic() {
        let init = GasState::new(PotentialKind::S, linspace(1.1, 3.0, 16), 0.5, 1.0).unwrap();
        let a = coulomb_metropolis(&init, 500, 0.4, 99).unwrap();
        let b = coulomb_metropolis(&init, 500, 0.4, 99).unwrap();
        assert_eq!(a.snapshots.len(), b.snapshots.len());
        for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
            for (x, y) in sa.particles.iter().zip(&sb.particles) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert_eq!(a.acceptance, b.acceptance);
    }
}
