//! Histograms and distribution distances for gas snapshots.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::montecarlo::gas::GasState;

/// A normalized particle histogram: `density[k]` is constant on
/// `[edges[k], edges[k+1])` and the densities integrate to one.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub n_samples: usize,
}

impl Histogram {
    pub fn total_mass(&self) -> f64 {
        self.density
            .iter()
            .zip(self.edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum()
    }

    /// Piecewise-linear CDF implied by the histogram.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.edges[0] {
            return 0.0;
        }
        let mut acc = 0.0;
        for (d, w) in self.density.iter().zip(self.edges.windows(2)) {
            if x < w[1] {
                return acc + d * (x - w[0]);
            }
            acc += d * (w[1] - w[0]);
        }
        1.0
    }
}

/// Pools all particles of all snapshots into a normalized histogram whose
/// edges span the observed support.
pub fn empirical_density(snapshots: &[GasState], bins: usize) -> Result<Histogram> {
    if snapshots.len() < 100 {
        return Err(Error::Domain("density estimate needs at least 100 snapshots"));
    }
    if bins == 0 {
        return Err(Error::InvalidSpec("need at least one bin".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut total = 0usize;
    for s in snapshots {
        for &x in &s.particles {
            lo = lo.min(x);
            hi = hi.max(x);
            total += 1;
        }
    }
    if !(hi > lo) {
        return Err(Error::Domain("degenerate support: all samples coincide"));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = alloc::vec![0usize; bins];
    for s in snapshots {
        for &x in &s.particles {
            let k = (((x - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
    }
    let edges = (0..=bins).map(|k| lo + k as f64 * width).collect();
    let density = counts
        .iter()
        .map(|&c| c as f64 / (total as f64 * width))
        .collect();
    Ok(Histogram {
        edges,
        density,
        n_samples: total,
    })
}

/// A tabulated CDF, evaluated by linear interpolation. Master fields export
/// these so that sampled gases can be tested against them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CdfTable {
    xs: Vec<f64>,
    ps: Vec<f64>,
}

impl CdfTable {
    pub fn new(xs: Vec<f64>, ps: Vec<f64>) -> Result<Self> {
        if xs.len() != ps.len() || xs.len() < 2 {
            return Err(Error::InvalidSpec("CDF table needs matching xs/ps, length ≥ 2".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSpec("CDF table abscissas must increase".into()));
        }
        if ps.windows(2).any(|w| w[1] < w[0]) || ps[0] < -1e-12 || ps[xs.len() - 1] > 1.0 + 1e-12 {
            return Err(Error::InvalidSpec("CDF table values must be monotone in [0, 1]".into()));
        }
        Ok(CdfTable { xs, ps })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ps[0];
        }
        if x >= self.xs[n - 1] {
            return self.ps[n - 1];
        }
        let k = self.xs.partition_point(|&v| v <= x) - 1;
        let frac = (x - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        self.ps[k] + frac * (self.ps[k + 1] - self.ps[k])
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }
}

/// Kolmogorov–Smirnov distance between a sample and a reference CDF.
/// Sorts the slice in place.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_unstable_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((((i + 1) as f64) / n - f).abs());
        d = d.max((i as f64 / n - f).abs());
    }
    d
}

/// Two-sample Kolmogorov–Smirnov distance. Sorts both slices in place.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm;
    use crate::montecarlo::rng::Stream;
    use crate::potential::PotentialKind;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn fake_snapshots(count: usize, per: usize, seed: u64) -> Vec<GasState> {
        let mut stream = Stream::new(seed);
        (0..count)
            .map(|_| GasState {
                kind: PotentialKind::Q,
                particles: (0..per).map(|_| stream.normal()).collect(),
                t: 1.0,
                beta: 2.0,
            })
            .collect()
    }

    #[test]
    fn histogram_integrates_to_one() {
        let snaps = fake_snapshots(150, 4, 8);
        let h = empirical_density(&snaps, 40).unwrap();
        assert_eq!(h.n_samples, 600);
        assert_relative_eq!(h.total_mass(), 1.0, max_relative = 1e-12);
        assert_eq!(h.cdf(h.edges[0] - 1.0), 0.0);
        assert_eq!(h.cdf(h.edges[h.edges.len() - 1] + 1.0), 1.0);
    }

    #[test]
    fn too_few_snapshots_are_rejected() {
        let snaps = fake_snapshots(99, 4, 8);
        assert!(matches!(
            empirical_density(&snaps, 40),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ks_accepts_the_true_distribution_and_flags_a_shift() {
        let mut stream = Stream::new(21);
        let mut zs: Vec<f64> = (0..50_000).map(|_| stream.normal()).collect();
        let d = ks_distance(&mut zs, fm::phi_cdf);
        assert!(d < 0.01, "KS against own CDF {d}");
        let d_shift = ks_distance(&mut zs, |x| fm::phi_cdf(x - 1.0));
        assert!(d_shift > 0.3, "KS against shifted CDF {d_shift}");
    }

    #[test]
    fn two_sample_ks_on_split_halves_is_small() {
        let mut stream = Stream::new(4);
        let mut a: Vec<f64> = (0..30_000).map(|_| stream.normal()).collect();
        let mut b: Vec<f64> = (0..30_000).map(|_| stream.normal()).collect();
        assert!(ks_two_sample(&mut a, &mut b) < 0.02);
        let mut c: Vec<f64> = (0..30_000).map(|_| stream.normal() + 0.5).collect();
        assert!(ks_two_sample(&mut a, &mut c) > 0.15);
    }

    #[test]
    fn cdf_table_interpolates_linearly() {
        let t = CdfTable::new(vec![0.0, 1.0, 3.0], vec![0.0, 0.5, 1.0]).unwrap();
        assert_eq!(t.eval(-1.0), 0.0);
        assert_eq!(t.eval(4.0), 1.0);
        assert_relative_eq!(t.eval(0.5), 0.25, max_relative = 1e-15);
        assert_relative_eq!(t.eval(2.0), 0.75, max_relative = 1e-15);
        assert!(CdfTable::new(vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
        assert!(CdfTable::new(vec![0.0, 1.0], vec![0.5, 0.0]).is_err());
    }

    #[test]
    fn binning_twice_as_fine_barely_moves_the_implied_cdf() {
        let snaps = fake_snapshots(500, 16, 13);
        let coarse = empirical_density(&snaps, 64).unwrap();
        let fine = empirical_density(&snaps, 128).unwrap();
        let (lo, hi) = (coarse.edges[0], coarse.edges[coarse.edges.len() - 1]);
        let mut worst = 0.0f64;
        for k in 0..=1000 {
            let x = lo + (hi - lo) * k as f64 / 1000.0;
            worst = worst.max((coarse.cdf(x) - fine.cdf(x)).abs());
        }
        assert!(worst < 0.01, "CDF shift under refinement {worst}");
    }
}
