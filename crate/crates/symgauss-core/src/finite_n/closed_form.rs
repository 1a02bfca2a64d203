//! Closed form for the β = 2 partition function at any N.
//!
//! At β = 2 the Vandermonde-squared integral telescopes through the
//! orthogonal-polynomial norms of the log-normal weight, all of which are
//! Gaussian integrals, leaving
//!
//! ```text
//!   log I₂ = log N! + (N/2)·log(2πσ²) + N³σ²/2 + (N³−N)σ²/6
//!            + Σ_{k=1}^{N−1} (N−k)·log(1 − e^{−kσ²})
//! ```
//!
//! for the reduced integral, equivalently (prefactor convention applied)
//!
//! ```text
//!   log Z₂ = log ω₂(N) − N²·log 2 + (N/2)·log(2πσ²) + (N³−N)σ²/6
//!            + Σ_{k=1}^{N−1} (N−k)·log(1 − e^{−kσ²}).
//! ```

use crate::ensemble::{
    ln_factorial, log_prefactor_reduced_to_full, EnsembleSpec, Method, PartitionResult,
    PrefactorConvention, Space,
};
use crate::error::Result;
use crate::fm;

/// Reduced value log I₂(N, σ).
pub fn z2_reduced_log(n: usize, sigma: f64) -> f64 {
    let nf = n as f64;
    let s2 = sigma * sigma;
    let mut v = ln_factorial(n)
        + 0.5 * nf * fm::ln(fm::TAU * s2)
        + 0.5 * nf * nf * nf * s2
        + (nf * nf * nf - nf) * s2 / 6.0;
    v += product_log_sum(n, s2);
    v
}

/// Σ_{k=1}^{N−1} (N−k)·log(1 − e^{−kσ²}), in cancellation-stable form on
/// both ends of the kσ² range.
fn product_log_sum(n: usize, s2: f64) -> f64 {
    let mut acc = 0.0;
    for k in 1..n {
        let x = k as f64 * s2;
        // log(1 − e^{−x}): expm1 keeps small x accurate, log1p large x
        let term = if x < 0.5 {
            fm::ln(-fm::expm1(-x))
        } else {
            fm::ln_1p(-fm::exp(-x))
        };
        acc += (n - k) as f64 * term;
    }
    acc
}

/// Exact log-partition function on the complex positive-definite cone
/// (β = 2), any N ≥ 1.
pub fn z2_closed_form(n: usize, sigma: f64, conv: &PrefactorConvention) -> Result<PartitionResult> {
    let spec = EnsembleSpec::new(Space::PdComplex, n, sigma)?;
    conv.validate()?;
    let reduced = z2_reduced_log(n, sigma);
    let log_value = if conv.include_prefactor {
        reduced + log_prefactor_reduced_to_full(&spec, conv)?
    } else {
        reduced
    };
    Ok(PartitionResult {
        log_value,
        method: Method::ClosedForm,
        // exact formula; only double rounding across the O(N) summation
        error_estimate: 1e-13 * (1.0 + fm::abs(log_value)),
        convention: *conv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn full(n: usize, sigma: f64) -> f64 {
        let conv = PrefactorConvention {
            include_prefactor: true,
            ..PrefactorConvention::default()
        };
        z2_closed_form(n, sigma, &conv).unwrap().log_value
    }

    #[test]
    fn n1_full_value() {
        // one-dimensional case: Z = √(2π)/2 at σ = 1 with ω = 1
        let v = full(1, 1.0);
        assert_relative_eq!(v, fm::ln(fm::sqrt(fm::TAU) / 2.0), max_relative = 1e-14);
    }

    #[test]
    fn n1_reduced_is_the_lognormal_mass() {
        // ∫_0^∞ e^{−log²u/(2σ²)} du = √(2π)·σ·e^{σ²/2}
        for &sigma in &[0.25, 0.5, 1.0, 2.0] {
            let want = fm::ln(fm::sqrt(fm::TAU) * sigma) + 0.5 * sigma * sigma;
            assert_relative_eq!(z2_reduced_log(1, sigma), want, max_relative = 1e-14);
        }
    }

    #[test]
    fn n_recurrence_of_the_product_term() {
        // stepping N → N+1 adds (2N+1)·(−log 2) + ½log(2πσ²)
        // + N(N+1)σ²/2 + Σ_{k=1}^{N} log(1−e^{−kσ²}) to the full value
        for &sigma in &[0.3, 0.7, 1.1] {
            let s2 = sigma * sigma;
            for n in 1..6usize {
                let nf = n as f64;
                let mut want = -(2.0 * nf + 1.0) * fm::LN_2
                    + 0.5 * fm::ln(fm::TAU * s2)
                    + 0.5 * nf * (nf + 1.0) * s2;
                for k in 1..=n {
                    want += fm::ln_1p(-fm::exp(-(k as f64) * s2));
                }
                let got = full(n + 1, sigma) - full(n, sigma);
                assert_relative_eq!(got, want, max_relative = 1e-11, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn large_sigma_dominated_by_the_cubic_term() {
        let a = full(3, 10.0);
        let b = full(3, 30.0);
        assert!(a > 0.0 && b > a);
        // (N³−N)σ²/6 = 4σ² at N = 3 dominates everything else
        assert_relative_eq!(b / (30.0f64 * 30.0), 4.0, max_relative = 0.01);
    }

    #[test]
    fn reduced_and_full_differ_by_the_recorded_prefactor() {
        let spec = EnsembleSpec::new(Space::PdComplex, 5, 0.4).unwrap();
        let conv = PrefactorConvention {
            omega_beta_n: 2.5,
            vol_un: 1.0,
            include_prefactor: true,
        };
        let f = z2_closed_form(5, 0.4, &conv).unwrap().log_value;
        let r = z2_reduced_log(5, 0.4);
        let shift = log_prefactor_reduced_to_full(&spec, &conv).unwrap();
        assert_relative_eq!(f, r + shift, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        let conv = PrefactorConvention::default();
        assert!(z2_closed_form(0, 0.5, &conv).is_err());
        assert!(z2_closed_form(3, -1.0, &conv).is_err());
    }
}
