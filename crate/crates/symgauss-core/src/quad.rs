//! Gauss–Legendre quadrature in double precision.
//!
//! Nodes come from Newton iteration on the three-term recurrence; for the
//! node counts used here (≤ 64) that is accurate to a few ulps. Panels are
//! composed explicitly by the callers, which lets them grade panel widths
//! geometrically into integrable endpoint singularities (√ edges of
//! equilibrium densities, log kernels) instead of relying on adaptivity.

use alloc::vec;
use alloc::vec::Vec;

use crate::fm;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    /// Nodes on (−1, 1), ascending.
    pub nodes: Vec<f64>,
    /// Matching weights, summing to 2.
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi-style initial guess, then Newton on P_n
            let mut x = -libm::cos(fm::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..60 {
                let (p, d) = legendre_with_deriv(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if fm::abs(dx) < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            weights[i] = w;
            nodes[n - 1 - i] = -x;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// ∫_a^b f, single panel. Degenerate panels (graded below one ulp)
    /// contribute nothing rather than sampling an endpoint singularity.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// ∫ over a list of panels.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(&self, panels: &[(f64, f64)], mut f: F) -> f64 {
        let mut s = 0.0;
        for &(a, b) in panels {
            s += self.integrate(a, b, &mut f);
        }
        s
    }
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Subdivision of [a, b] graded geometrically toward `a` (`toward_a`) or `b`:
/// `levels` panels whose widths decay by `ratio` toward the singular end,
/// innermost panel touching it.
pub fn graded_panels(a: f64, b: f64, toward_a: bool, levels: usize, ratio: f64) -> Vec<(f64, f64)> {
    assert!(b > a && levels >= 1 && ratio > 0.0 && ratio < 1.0);
    let mut cuts = Vec::with_capacity(levels + 1);
    // offsets from the singular end: (b−a)·ratio^k
    let w = b - a;
    cuts.push(0.0);
    for k in (0..levels).rev() {
        cuts.push(w * fm::pow(ratio, k as f64));
    }
    let mut panels = Vec::with_capacity(levels);
    for i in 0..levels {
        let (lo, hi) = (cuts[i], cuts[i + 1]);
        if toward_a {
            panels.push((a + lo, a + hi));
        } else {
            panels.push((b - hi, b - lo));
        }
    }
    if !toward_a {
        panels.reverse();
    }
    panels
}

/// Panels for [a, b] graded into both endpoints: geometric refinement into
/// each end plus a single middle panel.
pub fn edge_graded_panels(a: f64, b: f64, levels: usize, ratio: f64) -> Vec<(f64, f64)> {
    let mid = 0.5 * (a + b);
    let mut p = graded_panels(a, mid, true, levels, ratio);
    p.extend(graded_panels(mid, b, false, levels, ratio));
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_two() {
        for n in [2, 8, 17, 32, 64] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert_relative_eq!(s, 2.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn polynomial_exactness() {
        // n-node Gauss integrates degree 2n−1 exactly
        let gl = GaussLegendre::new(5);
        let exact = 2.0 / 10.0; // ∫_{-1}^{1} x^9 dx = 0, x^8 → 2/9 ... use x^8
        let got = gl.integrate(-1.0, 1.0, |x| fm::pow(x, 8.0));
        assert_relative_eq!(got, 2.0 / 9.0, max_relative = 1e-12);
        let odd = gl.integrate(-1.0, 1.0, |x| fm::pow(x, 9.0));
        assert!(fm::abs(odd) < 1e-15);
        let _ = exact;
    }

    #[test]
    fn gaussian_integral_on_panels() {
        let gl = GaussLegendre::new(32);
        let panels: Vec<(f64, f64)> = (-12..12).map(|k| (k as f64, k as f64 + 1.0)).collect();
        let got = gl.integrate_panels(&panels, |x| fm::exp(-0.5 * x * x));
        assert_relative_eq!(got, fm::SQRT_TAU, max_relative = 1e-14);
    }

    #[test]
    fn graded_panels_cover_interval() {
        let p = graded_panels(1.0, 3.0, true, 20, 0.5);
        assert_eq!(p.len(), 20);
        assert_eq!(p[0].0, 1.0);
        assert_relative_eq!(p.last().unwrap().1, 3.0, max_relative = 1e-15);
        for w in p.windows(2) {
            assert_relative_eq!(w[0].1, w[1].0, max_relative = 1e-12);
        }
    }

    #[test]
    fn sqrt_edge_singularity_resolved_by_grading() {
        // ∫_0^1 1/√x dx = 2; the innermost panel carries ~2√(ratio^levels)
        // of mass and is itself singular, so the grading must run deep
        let gl = GaussLegendre::new(24);
        let panels = graded_panels(0.0, 1.0, true, 48, 0.4);
        let got = gl.integrate_panels(&panels, |x| 1.0 / fm::sqrt(x));
        assert_relative_eq!(got, 2.0, max_relative = 1e-10);
    }
}
