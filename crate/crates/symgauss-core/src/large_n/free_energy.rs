//! Planar free energy of the positive-cone ensemble and finite-size gap.
//!
//! `f_uni` evaluates the free-energy functional on the closed-form field
//! numerically; `f_uni_closed` is the trilogarithm form it must reproduce.
//! `genus_deltas` measures how fast the exact finite-N value approaches the
//! planar limit when σ² = t/N, which is the 1/N² genus-expansion rate.

use alloc::vec::Vec;

use crate::ensemble::ln_factorial;
use crate::error::{Error, Result};
use crate::finite_n::z2_reduced_log;
use crate::fm;
use crate::large_n::master_field::{master_field_sw, MasterField};
use crate::large_n::trilog::{trilog, zeta3};
use crate::quad::{graded_panels, GaussLegendre};

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("'t Hooft parameter must be positive and finite"))
    }
}

/// −(1/2t)∫ρ ln²λ + ∬ρ(x)ρ(y) ln|x−y| dx dy on one quadrature resolution.
fn functional_value(field: &MasterField, t: f64, gl_nodes: usize, levels: usize) -> f64 {
    let potential_term =
        field.integrate_against_with(|x| fm::ln(x) * fm::ln(x), gl_nodes, levels);

    // write the symmetric double integral as 2 ∫ dx ρ(x) ∫_x^b dy ρ(y) ln(y−x);
    // the inner integral is graded into its logarithmic end at y = x and into
    // the soft edge at b, the outer one into both support edges
    let gl = GaussLegendre::new(gl_nodes);
    let (a, b) = field.support();
    let inner = |x: f64| {
        // outer nodes graded into the soft edge can sit within rounding of
        // b; the remaining sliver carries no weight
        if b - x < 1e-12 * (b - a) {
            return 0.0;
        }
        let mid = 0.5 * (x + b);
        let mut panels = graded_panels(x, mid, true, levels, 0.45);
        panels.extend(graded_panels(mid, b, false, levels, 0.45));
        gl.integrate_panels(&panels, |y| {
            let d = y - x;
            if d <= 0.0 {
                0.0
            } else {
                field.density(y) * fm::ln(d)
            }
        })
    };
    let pair_term =
        2.0 * field.integrate_against_with(inner, gl_nodes, levels);

    -potential_term / (2.0 * t) + pair_term
}

/// Planar free energy from the field itself. Evaluated at two quadrature
/// resolutions; disagreement beyond 1e-7 is reported instead of a value.
pub fn f_uni(t: f64) -> Result<f64> {
    check_t(t)?;
    let field = master_field_sw(t)?;
    let coarse = functional_value(&field, t, 24, 36);
    let fine = functional_value(&field, t, 32, 44);
    let diff = fm::abs(fine - coarse);
    if diff > 1e-7 {
        return Err(Error::QuadratureFailure {
            worst: None,
            achieved: diff,
            target: 1e-7,
        });
    }
    Ok(fine)
}

/// 2t/3 − π²/(6t) + (ζ(3) − Li₃(e^{−t}))/t².
pub fn f_uni_closed(t: f64) -> Result<f64> {
    check_t(t)?;
    let li3 = trilog(fm::exp(-t))?;
    Ok(2.0 * t / 3.0 - fm::PI * fm::PI / (6.0 * t) + (zeta3() - li3) / (t * t))
}

/// Large-N form of (1/N)·log Z₂ at σ² = t/N including the Gaussian
/// fluctuation term: −½ln(2N/π) + ¾ + t/6 − (Li₃(e^{−t}) − ζ(3))/t².
pub fn z2_asymptotic(n: usize, t: f64) -> Result<f64> {
    check_t(t)?;
    if n == 0 {
        return Err(Error::Domain("matrix size must be positive"));
    }
    let li3 = trilog(fm::exp(-t))?;
    Ok(-0.5 * fm::ln(2.0 * n as f64 / fm::PI) + 0.75 + t / 6.0 - (li3 - zeta3()) / (t * t))
}

/// |(1/N²)·log Z̃₂(N, √(t/N)) − f_uni(t)| for each N, where Z̃₂ strips the
/// (2π)^N N! measure factor. Successive halvings of this gap expose the 1/N²
/// rate: Δ_{2N}/Δ_N → 1/4.
pub fn genus_deltas(t: f64, ns: &[usize]) -> Result<Vec<f64>> {
    check_t(t)?;
    let f = f_uni_closed(t)?;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 {
            return Err(Error::Domain("matrix size must be positive"));
        }
        let sigma = fm::sqrt(t / n as f64);
        let log_ztilde =
            z2_reduced_log(n, sigma) - n as f64 * fm::ln(fm::TAU) - ln_factorial(n);
        out.push(fm::abs(log_ztilde / (n as f64 * n as f64) - f));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_reproduces_reference_values() {
        assert!(fm::abs(f_uni_closed(0.1).unwrap() - (-1.8429244921)) < 1e-9);
        assert!(fm::abs(f_uni_closed(0.25).unwrap() - (-1.29709687852)) < 1e-9);
        assert!(fm::abs(f_uni_closed(1.0).unwrap() - (-0.163205921232)) < 1e-9);
    }

    #[test]
    fn functional_on_the_field_matches_the_closed_form() {
        for t in [0.25, 1.0] {
            let numeric = f_uni(t).unwrap();
            let closed = f_uni_closed(t).unwrap();
            assert!(
                fm::abs(numeric - closed) < 1e-6,
                "gap {} at t {t}",
                numeric - closed
            );
        }
    }

    #[test]
    fn genus_gap_shrinks_at_the_inverse_square_rate() {
        for t in [0.25, 1.0] {
            let d = genus_deltas(t, &[16, 32, 64, 128]).unwrap();
            for w in d.windows(2) {
                let ratio = w[1] / w[0];
                assert!(
                    (0.15..=0.4).contains(&ratio),
                    "ratio {ratio} outside the 1/N² band at t {t}"
                );
            }
        }
    }

    #[test]
    fn asymptotic_loses_its_trilog_tail_at_large_coupling() {
        let t = 20.0;
        let with = z2_asymptotic(64, t).unwrap();
        let without =
            -0.5 * fm::ln(128.0 / fm::PI) + 0.75 + t / 6.0 + zeta3() / (t * t);
        assert!(fm::abs(with - without) < 1e-8);
    }

    #[test]
    fn rejects_degenerate_arguments() {
        assert!(f_uni_closed(0.0).is_err());
        assert!(z2_asymptotic(0, 1.0).is_err());
        assert!(genus_deltas(1.0, &[0]).is_err());
    }
}
