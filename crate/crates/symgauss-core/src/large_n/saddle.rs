//! Residual of the singular integral equation each master field must solve.
//!
//! At a point λ inside the support the field balances the confining force
//! against the principal-value Coulomb kernel:
//!
//! * Q:   λ/(βt)                  = PV ∫ ρ(μ)/(λ−μ) dμ
//! * SW:  ln λ/(βtλ)              = PV ∫ ρ(μ)/(λ−μ) dμ
//! * S:   acosh λ/(4t√(λ²−1))     = PV ∫ ρ(μ)/(λ−μ) dμ
//!
//! The S form carries no β because its gas is only ever run at the convention
//! where the pair exponent is one; the closed-form Q and SW fields zero their
//! residuals at β = 2 and acquire an O(1) offset at other β, which is how the
//! β ↔ coupling rescaling is exercised in tests.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fm;
use crate::large_n::master_field::MasterField;
use crate::potential::PotentialKind;
use crate::pv::pv_integral;

/// Fraction of the support width a probe must keep clear of each edge. The
/// kernel loses a digit per decade of edge proximity, so residuals measured
/// closer in would reflect quadrature, not the field.
const EDGE_MARGIN: f64 = 0.01;

/// Confining side of the saddle equation at λ.
fn force_lhs(kind: PotentialKind, t: f64, beta: f64, lambda: f64) -> f64 {
    match kind {
        PotentialKind::Q => lambda / (beta * t),
        PotentialKind::Sw => fm::ln(lambda) / (beta * t * lambda),
        PotentialKind::S => {
            fm::acosh(lambda) / (4.0 * t * fm::sqrt(lambda * lambda - 1.0))
        }
    }
}

/// LHS − PV∫ρ/(λ−μ)dμ at each probe. Probes within [`EDGE_MARGIN`] of the
/// support width from either edge are rejected individually, identifying the
/// offender by position in the input.
pub fn saddle_residual(field: &MasterField, beta: f64, probes: &[f64]) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain("Dyson index must be positive and finite"));
    }
    let (a, b) = field.support();
    let margin = EDGE_MARGIN * (b - a);
    let mut out = Vec::with_capacity(probes.len());
    for (index, &lambda) in probes.iter().enumerate() {
        if !(lambda - a >= margin && b - lambda >= margin) {
            return Err(Error::ProbeTooCloseToEdge { index });
        }
        let coulomb = pv_integral(|mu| field.density(mu), a, b, lambda)?;
        out.push(force_lhs(field.kind, field.t, beta, lambda) - coulomb);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::large_n::master_field::{master_field_q, master_field_sw, MasterField};
    use alloc::vec;

    #[test]
    fn semicircle_solves_its_equation_at_unit_coupling() {
        let f = master_field_q(1.0).unwrap();
        let res = saddle_residual(&f, 2.0, &[-1.0, -0.5, 0.0, 0.5, 1.0]).unwrap();
        for r in res {
            assert!(fm::abs(r) < 1e-6, "residual {r}");
        }
    }

    #[test]
    fn sw_field_solves_its_equation_across_couplings() {
        for t in [0.1, 0.25, 1.0] {
            let f = master_field_sw(t).unwrap();
            let (a, b) = f.support();
            let probes: Vec<f64> = (1..=10)
                .map(|k| a + (b - a) * (0.06 + 0.88 * (k - 1) as f64 / 9.0))
                .collect();
            let res = saddle_residual(&f, 2.0, &probes).unwrap();
            for (p, r) in probes.iter().zip(&res) {
                assert!(fm::abs(*r) < 1e-5, "residual {r} at probe {p}, t {t}");
            }
        }
    }

    #[test]
    fn off_dyson_index_shifts_the_residual_by_the_force_ratio() {
        // at λ = 1, t = 1 the Coulomb side is 1/2, so residual(β) = 1/β − 1/2
        let f = master_field_q(1.0).unwrap();
        let at2 = saddle_residual(&f, 2.0, &[1.0]).unwrap()[0];
        let at4 = saddle_residual(&f, 4.0, &[1.0]).unwrap()[0];
        assert!(fm::abs(at2) < 1e-6);
        assert!(fm::abs(at4 + 0.25) < 1e-6);
    }

    #[test]
    fn zero_density_leaves_the_bare_force() {
        let f = MasterField::from_chebyshev(0.25, 2.0, vec![0.0]);
        let lambda = 1.5;
        let res = saddle_residual(&f, 1.0, &[lambda]).unwrap()[0];
        let expect = fm::acosh(lambda) / (4.0 * 0.25 * fm::sqrt(lambda * lambda - 1.0));
        assert!(fm::abs(res - expect) < 1e-12);
    }

    #[test]
    fn probes_hugging_an_edge_are_rejected_by_position() {
        let f = master_field_q(1.0).unwrap();
        let err = saddle_residual(&f, 2.0, &[0.0, -2.0 + 1e-3]).unwrap_err();
        match err {
            Error::ProbeTooCloseToEdge { index } => assert_eq!(index, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_nonpositive_dyson_index() {
        let f = master_field_q(1.0).unwrap();
        assert!(saddle_residual(&f, 0.0, &[0.0]).is_err());
    }
}
