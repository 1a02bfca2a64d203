//! Symplectic Gram–Schmidt: bring a skew moment matrix to standard form.
//!
//! Given the antisymmetric pairing M on monomials, produce polynomials
//! R_0..R_{N−1} (deg R_r = r) whose pairing is the block-diagonal standard
//! form ⟨R_{2k}, R_{2l}⟩ = ⟨R_{2k+1}, R_{2l+1}⟩ = 0, ⟨R_{2k}, R_{2l+1}⟩ =
//! δ_{kl}. The standard form fixes pair products, not individual scales; we
//! keep even-degree polynomials monic and push all scale into their odd
//! partners, which leaves the per-pair product of leading coefficients (and
//! hence the assembled partition value) invariant.
//!
//! Elimination runs at the precision of the matrix. Pivots are monitored
//! against the absolute-value mass of their accumulation: when cancellation
//! has eaten into the mantissa to within 96 bits of the bottom, the result
//! can no longer be trusted and a precision-escalation error asks the caller
//! to recompute the moments with a doubled mantissa.

use alloc::vec;
use alloc::vec::Vec;

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::fm;
use crate::finite_n::moments::SkewMomentMatrix;
use crate::xprec::Ctx;

/// Clean mantissa bits a pivot must retain after cancellation.
const PIVOT_HEADROOM_BITS: i32 = 96;

/// Polynomials bringing a skew pairing to standard form.
#[derive(Debug, Clone)]
pub struct SkewBasis {
    pub n: usize,
    pub prec: usize,
    /// Row r holds the monomial coefficients of R_r, constant term first
    /// (r + 1 entries).
    pub coeffs: Vec<Vec<BigFloat>>,
    /// Leading coefficients a_r of R_r: 1 for even r, 1/c_k for r = 2k+1.
    pub leading: Vec<BigFloat>,
    /// Pair pivots c_k = ⟨q_{2k}, q_{2k+1}⟩ of the monic pre-normalized
    /// basis, all strictly positive.
    pub pivots: Vec<BigFloat>,
    /// Worst residual deviation of the pairing from standard form, relative
    /// to the absolute mass of its accumulation.
    pub defect: f64,
}

/// Pairing of two coefficient vectors under M, with the absolute-value mass
/// of the accumulation for cancellation monitoring.
fn pair_with_scale(
    ctx: &Ctx,
    m: &SkewMomentMatrix,
    p: &[BigFloat],
    q: &[BigFloat],
) -> (BigFloat, BigFloat) {
    let mut acc = ctx.zero();
    let mut scale = ctx.zero();
    for (i, pi) in p.iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        for (j, qj) in q.iter().enumerate() {
            if i == j || qj.is_zero() {
                continue;
            }
            let t = {
                let a = ctx.mul(pi, qj);
                ctx.mul(&a, m.entry(i, j))
            };
            acc = ctx.add(&acc, &t);
            scale = ctx.add(&scale, &t.abs());
        }
    }
    (acc, scale)
}

/// axpy on coefficient vectors: dst ← dst + coef·src.
fn add_scaled(ctx: &Ctx, dst: &mut Vec<BigFloat>, coef: &BigFloat, src: &[BigFloat]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), ctx.zero());
    }
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        let t = ctx.mul(coef, s);
        *d = ctx.add(d, &t);
    }
}

pub fn symplectic_gram_schmidt(m: &SkewMomentMatrix) -> Result<SkewBasis> {
    let n = m.dim();
    let pairs = n / 2;
    let ctx = Ctx::new(m.prec);

    // monic working polynomials q_r, built pair by pair
    let mut q: Vec<Vec<BigFloat>> = Vec::with_capacity(n);
    let mut pivots: Vec<BigFloat> = Vec::with_capacity(pairs);

    for k in 0..pairs {
        for v_deg in [2 * k, 2 * k + 1] {
            let mut v = vec![ctx.zero(); v_deg + 1];
            v[v_deg] = ctx.one();
            // remove components along every completed pair; the standard
            // form makes (q_{2l}, q_{2l+1}) mutually dual up to c_l
            for l in 0..k {
                let (along_odd, _) = pair_with_scale(&ctx, m, &v, &q[2 * l + 1]);
                let (along_even, _) = pair_with_scale(&ctx, m, &v, &q[2 * l]);
                let minus = ctx.div(&along_odd, &pivots[l]).neg();
                add_scaled(&ctx, &mut v, &minus, &q[2 * l]);
                let plus = ctx.div(&along_even, &pivots[l]);
                add_scaled(&ctx, &mut v, &plus, &q[2 * l + 1]);
            }
            q.push(v);
        }
        let (c_k, scale) = pair_with_scale(&ctx, m, &q[2 * k], &q[2 * k + 1]);
        let lost = match (Ctx::exponent(&scale), Ctx::exponent(&c_k)) {
            (Some(es), Some(ec)) => es - ec,
            // pivot vanished identically at working precision
            _ => i32::MAX,
        };
        if lost == i32::MAX || m.prec as i32 - lost < PIVOT_HEADROOM_BITS {
            return Err(Error::PrecisionEscalation {
                required_bits: 2 * m.prec,
            });
        }
        if Ctx::is_negative(&c_k) {
            return Err(Error::DegeneratePairing {
                pair: k,
                value: Ctx::to_f64(&c_k),
            });
        }
        pivots.push(c_k);
    }

    // final basis: R_{2k} = q_{2k}, R_{2k+1} = q_{2k+1}/c_k
    let mut coeffs: Vec<Vec<BigFloat>> = Vec::with_capacity(n);
    let mut leading: Vec<BigFloat> = Vec::with_capacity(n);
    for r in 0..n {
        if r % 2 == 0 {
            coeffs.push(q[r].clone());
            leading.push(ctx.one());
        } else {
            let inv = ctx.div(&ctx.one(), &pivots[r / 2]);
            let row: Vec<BigFloat> = q[r].iter().map(|c| ctx.mul(c, &inv)).collect();
            coeffs.push(row);
            leading.push(inv);
        }
    }

    let defect = standard_form_defect(&ctx, m, &coeffs);

    Ok(SkewBasis {
        n,
        prec: m.prec,
        coeffs,
        leading,
        pivots,
        defect,
    })
}

/// Worst deviation of the pairing of the given polynomials from the
/// standard block form, relative to the absolute mass of each accumulation.
pub(crate) fn standard_form_defect(
    ctx: &Ctx,
    m: &SkewMomentMatrix,
    coeffs: &[Vec<BigFloat>],
) -> f64 {
    let n = coeffs.len();
    let mut worst = 0.0f64;
    for r in 0..n {
        for s in (r + 1)..n {
            let (v, scale) = pair_with_scale(ctx, m, &coeffs[r], &coeffs[s]);
            let expected_one = s == r + 1 && r % 2 == 0;
            let dev = if expected_one {
                let one = ctx.one();
                ctx.sub(&v, &one)
            } else {
                v
            };
            let rel = match (Ctx::exponent(&dev), Ctx::exponent(&scale)) {
                (None, _) => 0.0,
                (Some(ed), Some(es)) => fm::pow(2.0, (ed - es) as f64),
                (Some(ed), None) => fm::pow(2.0, ed as f64),
            };
            if rel > worst {
                worst = rel;
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_n::moments::{
        q_moment_matrix, skew_moment_matrix, skew_moment_matrix_with_prec,
    };
    use crate::potential::{Potential, PotentialKind};
    use crate::xprec::rel_diff_log2;

    fn sw_matrix(sigma: f64, n: usize) -> SkewMomentMatrix {
        skew_moment_matrix(Potential::new(PotentialKind::Sw), sigma, n).unwrap()
    }

    #[test]
    fn n2_leading_pair_is_one_over_the_pivot() {
        let m = sw_matrix(0.3, 2);
        let b = symplectic_gram_schmidt(&m).unwrap();
        let ctx = Ctx::new(m.prec);
        assert_eq!(Ctx::to_f64(&b.leading[0]), 1.0);
        let prod = ctx.mul(&b.leading[1], m.entry(0, 1));
        let one = ctx.one();
        let d = rel_diff_log2(&ctx, &prod, &one);
        assert!(d < -200.0, "a_1·M[0,1] off by 2^{d}");
        assert_eq!(b.pivots.len(), 1);
    }

    #[test]
    fn gaussian_oracle_defect_below_tolerance() {
        // classical Gaussian weight: independent construction of the
        // pairing, so the defect measures the elimination itself
        let m = q_moment_matrix(1.0, 8, 256);
        let b = symplectic_gram_schmidt(&m).unwrap();
        assert!(b.defect < 1e-20, "defect {}", b.defect);
        for c in &b.pivots {
            assert!(c.is_positive());
        }
    }

    #[test]
    fn sw_pairing_reproduces_the_block_form() {
        let m = sw_matrix(0.4, 6);
        let b = symplectic_gram_schmidt(&m).unwrap();
        assert!(b.defect < 1e-20, "defect {}", b.defect);
    }

    #[test]
    fn s_pairing_reproduces_the_block_form() {
        let m = skew_moment_matrix(Potential::new(PotentialKind::S), 0.5, 4).unwrap();
        let b = symplectic_gram_schmidt(&m).unwrap();
        assert!(b.defect < 1e-20, "defect {}", b.defect);
        for c in &b.pivots {
            assert!(c.is_positive());
        }
    }

    #[test]
    fn rescaling_a_pair_preserves_standard_form_and_leading_products() {
        let m = sw_matrix(0.5, 4);
        let b = symplectic_gram_schmidt(&m).unwrap();
        let ctx = Ctx::new(m.prec);

        // push scale 3 from the odd member to the even member of pair 0
        let mut coeffs = b.coeffs.clone();
        let three = ctx.big(3.0);
        let third = ctx.div(&ctx.one(), &three);
        coeffs[0] = coeffs[0].iter().map(|c| ctx.mul(c, &three)).collect();
        coeffs[1] = coeffs[1].iter().map(|c| ctx.mul(c, &third)).collect();

        let defect = standard_form_defect(&ctx, &m, &coeffs);
        assert!(defect < 1e-20, "rescaled defect {defect}");

        // product of leading coefficients per pair is what the partition
        // assembly consumes; it is unchanged under the rescaling
        let orig = ctx.mul(&b.leading[0], &b.leading[1]);
        let new_lead0 = ctx.mul(&b.leading[0], &three);
        let new_lead1 = ctx.mul(&b.leading[1], &third);
        let rescaled = ctx.mul(&new_lead0, &new_lead1);
        let d = rel_diff_log2(&ctx, &rescaled, &orig);
        assert!(d < -250.0);
    }

    #[test]
    fn starved_precision_requests_escalation() {
        // small σ concentrates the weight near u = 1, so successive monomials
        // are nearly dependent and the deeper pivots drown in cancellation;
        // at 128 bits the headroom check must ask for more
        let m = skew_moment_matrix_with_prec(Potential::new(PotentialKind::Sw), 0.05, 12, 128);
        let escalated = match m {
            Err(Error::QuadratureFailure { .. }) => true,
            Ok(matrix) => matches!(
                symplectic_gram_schmidt(&matrix),
                Err(Error::PrecisionEscalation { .. })
            ),
            _ => false,
        };
        assert!(escalated, "expected starvation at 128 bits");
    }
}
