//! Assembly of finite-N partition values from the skew route, and the
//! brute-force tensor quadrature used to cross-check everything at small N.
//!
//! For even N = 2m the β = 1 orthant integral factorizes over the standard
//! form of the skew pairing:
//!
//! ```text
//!   I₁ = N! · 2^{−m} · ∏_{k=0}^{m−1} c_k,
//! ```
//!
//! where c_k are the elimination pivots (the Pfaffian of the moment matrix,
//! computed stably). The identical identity with the Siegel weight's pivots
//! gives the reduced Siegel integral J. Equivalently, in terms of the
//! returned leading coefficients, ∏ c_k = (∏_l a_l)^{−1}: the product runs
//! over all N leading coefficients with degrees 0..N−1.

use crate::ensemble::{
    log_prefactor_reduced_to_full, EnsembleSpec, Method, PartitionResult, PrefactorConvention,
    Space,
};
use crate::error::{Error, Result};
use crate::finite_n::gram_schmidt::symplectic_gram_schmidt;
use crate::finite_n::moments::skew_moment_matrix_with_prec;
use crate::fm;
use crate::potential::{Potential, PotentialKind};
use crate::quad::GaussLegendre;
use crate::vandermonde::log_vandermonde;
use crate::xprec::Ctx;

use alloc::vec::Vec;

/// Mantissa ladder for the skew route; each failed rung doubles.
const PREC_LADDER: [usize; 4] = [256, 512, 1024, 2048];

/// Reduced orthant integral by the skew route, climbing the precision
/// ladder on escalation requests. Returns (log value, error bound).
fn skew_reduced_log(kind: PotentialKind, n: usize, sigma: f64) -> Result<(f64, f64)> {
    let p = Potential::new(kind);
    let mut last_escalation = Error::PrecisionEscalation {
        required_bits: PREC_LADDER[0],
    };
    for &prec in &PREC_LADDER {
        let matrix = match skew_moment_matrix_with_prec(p, sigma, n, prec) {
            Ok(m) => m,
            Err(e @ Error::QuadratureFailure { .. }) => {
                last_escalation = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        let basis = match symplectic_gram_schmidt(&matrix) {
            Ok(b) => b,
            Err(e @ Error::PrecisionEscalation { .. }) => {
                last_escalation = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        let pairs = n / 2;
        let mut ctx = Ctx::new(prec);
        let mut acc = ctx.ln_factorial(n);
        let ln2 = ctx.ln2();
        let shift = ctx.mul_u64(&ln2, pairs as u64);
        acc = ctx.sub(&acc, &shift);
        for c in &basis.pivots {
            let lc = ctx.ln(c);
            acc = ctx.add(&acc, &lc);
        }
        let value = Ctx::to_f64(&acc);
        // each log-pivot inherits the relative error of its moments plus the
        // achieved standard-form defect; the f64 cast adds its own rounding
        let err = pairs as f64 * (matrix.worst_rel_err + basis.defect)
            + 1e-14 * (1.0 + fm::abs(value));
        return Ok((value, err));
    }
    Err(last_escalation)
}

fn assemble(
    space: Space,
    n: usize,
    sigma: f64,
    conv: &PrefactorConvention,
    reduced: f64,
    err: f64,
) -> Result<PartitionResult> {
    conv.validate()?;
    let spec = EnsembleSpec::new(space, n, sigma)?;
    let log_value = if conv.include_prefactor {
        reduced + log_prefactor_reduced_to_full(&spec, conv)?
    } else {
        reduced
    };
    Ok(PartitionResult {
        log_value,
        method: Method::SkewPoly,
        error_estimate: err,
        convention: *conv,
    })
}

/// Partition function on the real positive-definite cone (β = 1) at even N,
/// by the skew-orthogonal route.
pub fn z1_finite(n: usize, sigma: f64, conv: &PrefactorConvention) -> Result<PartitionResult> {
    let (reduced, err) = skew_reduced_log(PotentialKind::Sw, n, sigma)?;
    assemble(Space::PdReal, n, sigma, conv, reduced, err)
}

/// Partition function on the Siegel upper half space at even N, by the skew
/// route with the Siegel weight.
pub fn zs_finite(n: usize, sigma: f64, conv: &PrefactorConvention) -> Result<PartitionResult> {
    let (reduced, err) = skew_reduced_log(PotentialKind::S, n, sigma)?;
    assemble(Space::Siegel, n, sigma, conv, reduced, err)
}

/// Brute-force tensor-product quadrature of the reduced orthant integral,
/// for N ≤ 4 (cost grows as grid^N). Runs the grid and its doubling and
/// reports their difference as the error estimate.
pub fn direct_quadrature_logz(spec: &EnsembleSpec, gridpoints: usize) -> Result<PartitionResult> {
    spec.validate()?;
    if spec.n > 4 {
        return Err(Error::TooLarge(alloc::format!(
            "direct quadrature evaluates grid^N integrand points; N = {} exceeds the N ≤ 4 cap",
            spec.n
        )));
    }
    if gridpoints < 8 {
        return Err(Error::InvalidSpec(
            "direct quadrature needs at least 8 gridpoints per axis".into(),
        ));
    }
    let coarse = tensor_log_integral(spec, gridpoints);
    let fine = tensor_log_integral(spec, 2 * gridpoints);
    let err = fm::abs(fine - coarse) + 1e-13 * (1.0 + fm::abs(fine));
    Ok(PartitionResult {
        log_value: fine,
        method: Method::Quadrature,
        error_estimate: err,
        convention: PrefactorConvention::default(),
    })
}

/// One tensor pass at a fixed per-axis node budget, on the log scale.
fn tensor_log_integral(spec: &EnsembleSpec, gridpoints: usize) -> f64 {
    let n = spec.n;
    let sigma = spec.sigma;
    let beta = spec.beta;

    let axis = match spec.space {
        Space::Siegel => {
            // u = cosh θ: factor e^{−θ²/(8σ²)}·sinh θ on θ ∈ (0, L];
            // repulsion tilts the mass to θ ≈ Ns², s = 2σ
            let s = 2.0 * sigma;
            let lim = n as f64 * s * s + 9.0 * s + 1.0;
            build_axis(gridpoints, 0.0, lim, |th| {
                (-th * th / (2.0 * s * s) + fm::ln(fm::sinh(th)), fm::cosh(th))
            })
        }
        _ => {
            // u = e^{σv}: factor σ·e^{−v²/2+σv} on v ∈ [−L, L]; the strongest
            // repulsion tilt any coordinate sees is σ(β(N−1)+1)
            let lim = sigma * (beta * (n as f64 - 1.0) + 1.0) + 9.0;
            build_axis(gridpoints, -lim, lim, |v| {
                (fm::ln(sigma) - 0.5 * v * v + sigma * v, fm::exp(sigma * v))
            })
        }
    };

    // two passes over the tensor grid: locate the log max, then accumulate
    let total = axis.u.len();
    let mut idx = alloc::vec![0usize; n];
    let mut u = alloc::vec![0.0f64; n];

    let mut pass = |max_log: Option<f64>| -> f64 {
        let mut acc = 0.0f64;
        let mut best = f64::NEG_INFINITY;
        idx.iter_mut().for_each(|i| *i = 0);
        loop {
            let mut log_f = 0.0;
            let mut w = 1.0;
            for d in 0..n {
                let k = idx[d];
                log_f += axis.base_log[k];
                w *= axis.weight[k];
                u[d] = axis.u[k];
            }
            log_f += beta * log_vandermonde(&u, 1.0);
            match max_log {
                None => {
                    if log_f > best {
                        best = log_f;
                    }
                }
                Some(m) => acc += w * fm::exp(log_f - m),
            }
            // odometer increment
            let mut d = 0;
            loop {
                idx[d] += 1;
                if idx[d] < total {
                    break;
                }
                idx[d] = 0;
                d += 1;
                if d == n {
                    return match max_log {
                        None => best,
                        Some(_) => acc,
                    };
                }
            }
        }
    };

    let max_log = pass(None);
    let acc = pass(Some(max_log));
    max_log + fm::ln(acc)
}

fn build_axis(
    gridpoints: usize,
    lo: f64,
    hi: f64,
    f: impl Fn(f64) -> (f64, f64),
) -> TensorAxis {
    // composite 16-point panels: spectral per panel, panel width ~(hi−lo)/n_p
    let nodes_per_panel = 16usize;
    let n_panels = (gridpoints + nodes_per_panel - 1) / nodes_per_panel;
    let gl = GaussLegendre::new(nodes_per_panel);
    let width = (hi - lo) / n_panels as f64;
    let mut weight = Vec::with_capacity(n_panels * nodes_per_panel);
    let mut base_log = Vec::with_capacity(n_panels * nodes_per_panel);
    let mut u = Vec::with_capacity(n_panels * nodes_per_panel);
    for p in 0..n_panels {
        let a = lo + p as f64 * width;
        let half = 0.5 * width;
        let mid = a + half;
        for (x, w) in gl.nodes.iter().zip(gl.weights.iter()) {
            let t = mid + half * x;
            let (bl, uu) = f(t);
            weight.push(w * half);
            base_log.push(bl);
            u.push(uu);
        }
    }
    TensorAxis { weight, base_log, u }
}

struct TensorAxis {
    weight: Vec<f64>,
    base_log: Vec<f64>,
    u: Vec<f64>,
}
