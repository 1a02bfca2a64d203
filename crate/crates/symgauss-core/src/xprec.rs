//! Software extended precision on top of `astro_float::BigFloat`.
//!
//! The skew moment matrices grow like `exp(σ²k²/2)` in the polynomial degree
//! k while their symplectic elimination cancels almost all of that growth, so
//! everything on the exact finite-N route runs at a configurable mantissa
//! size (256 bits by default, escalating on demand). This module wraps the
//! raw `BigFloat` API in a small context carrying precision, rounding mode,
//! and the shared constants cache, and adds the pieces astro-float does not
//! provide: conversion back to f64, an error function, and two quadrature
//! schemes for entire integrands.

use alloc::string::String;
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::error::{Error, Result};
use crate::fm;

/// Arithmetic context: precision in bits, rounding mode, constants cache.
pub struct Ctx {
    pub prec: usize,
    rm: RoundingMode,
    cc: Consts,
    sqrt2: Option<BigFloat>,
}

/// |z| above which erf/erfc/Φ switch from the Taylor series to the
/// continued fraction of the complementary function.
const ERF_CF_SWITCH: f64 = 6.0;

impl Ctx {
    pub fn new(prec: usize) -> Self {
        Ctx {
            prec,
            rm: RoundingMode::ToEven,
            cc: Consts::new().expect("constants cache allocation"),
            sqrt2: None,
        }
    }

    pub fn big(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }

    pub fn from_u64(&self, k: u64) -> BigFloat {
        BigFloat::from_u64(k, self.prec)
    }

    pub fn from_i64(&self, k: i64) -> BigFloat {
        BigFloat::from_i64(k, self.prec)
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_word(0, self.prec)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_word(1, self.prec)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, self.rm)
    }

    pub fn neg(&self, a: &BigFloat) -> BigFloat {
        a.neg()
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    pub fn mul_u64(&self, a: &BigFloat, k: u64) -> BigFloat {
        a.mul(&self.from_u64(k), self.prec, self.rm)
    }

    pub fn div_u64(&self, a: &BigFloat, k: u64) -> BigFloat {
        a.div(&self.from_u64(k), self.prec, self.rm)
    }

    /// a^n for machine-size n.
    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.prec, self.rm)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, self.rm)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, self.rm, &mut self.cc)
    }

    /// Natural log; the callers guarantee positivity (pivot signs are
    /// checked before logs are taken).
    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        assert!(
            a.is_positive() && !a.is_zero(),
            "log of non-positive extended-precision value"
        );
        a.ln(self.prec, self.rm, &mut self.cc)
    }

    pub fn sinh(&mut self, a: &BigFloat) -> BigFloat {
        a.sinh(self.prec, self.rm, &mut self.cc)
    }

    pub fn cosh(&mut self, a: &BigFloat) -> BigFloat {
        a.cosh(self.prec, self.rm, &mut self.cc)
    }

    pub fn tanh(&mut self, a: &BigFloat) -> BigFloat {
        a.tanh(self.prec, self.rm, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.prec, self.rm)
    }

    /// √2 at working precision, cached (Φ divides by it per call).
    pub fn sqrt2(&mut self) -> BigFloat {
        if let Some(v) = &self.sqrt2 {
            return v.clone();
        }
        let two = self.big(2.0);
        let v = self.sqrt(&two);
        self.sqrt2 = Some(v.clone());
        v
    }

    /// √(2π) at working precision.
    pub fn sqrt_tau(&mut self) -> BigFloat {
        let pi = self.pi();
        let two_pi = self.mul_u64(&pi, 2);
        self.sqrt(&two_pi)
    }

    pub fn ln2(&mut self) -> BigFloat {
        self.cc.ln_2(self.prec, self.rm)
    }

    /// log(n!) by summing logs at working precision.
    pub fn ln_factorial(&mut self, n: usize) -> BigFloat {
        let mut s = self.zero();
        for k in 2..=n {
            let lk = self.ln(&self.from_u64(k as u64));
            s = self.add(&s, &lk);
        }
        s
    }

    pub fn is_negative(a: &BigFloat) -> bool {
        a.is_negative() && !a.is_zero()
    }

    /// a < b.
    pub fn lt(a: &BigFloat, b: &BigFloat) -> bool {
        matches!(a.cmp(b), Some(c) if c < 0)
    }

    /// Binary exponent of a (None for zero/NaN); |a| ∈ [2^(e−1), 2^e).
    pub fn exponent(a: &BigFloat) -> Option<i32> {
        if a.is_zero() || a.is_nan() || a.is_inf() {
            None
        } else {
            a.exponent()
        }
    }

    /// Round-trip to double. Takes the top 128 mantissa bits, so the
    /// conversion itself is accurate to an f64 ulp.
    pub fn to_f64(a: &BigFloat) -> f64 {
        if a.is_nan() {
            return f64::NAN;
        }
        if a.is_inf_pos() {
            return f64::INFINITY;
        }
        if a.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if a.is_zero() {
            return 0.0;
        }
        let (m, _n, s, e, _inexact) = a.as_raw_parts().expect("finite value has raw parts");
        let k = m.len();
        let hi = m[k - 1] as f64;
        let lo = if k >= 2 { m[k - 2] as f64 } else { 0.0 };
        // value = 0.mantissa × 2^e with the mantissa MSB-aligned
        let v = fm::scalbn(hi, e - 64) + fm::scalbn(lo, e - 128);
        if s == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Full-precision decimal string (scientific notation).
    pub fn to_decimal_string(&mut self, a: &BigFloat) -> Result<String> {
        a.format(Radix::Dec, self.rm, &mut self.cc)
            .map_err(|_| Error::Serialization("extended-precision format failed".into()))
    }

    /// Parse a decimal string at working precision.
    pub fn parse_decimal(&mut self, s: &str) -> Result<BigFloat> {
        let v = BigFloat::parse(s, Radix::Dec, self.prec, self.rm, &mut self.cc);
        if v.is_nan() {
            Err(Error::Serialization(alloc::format!(
                "not a decimal float: {s:?}"
            )))
        } else {
            Ok(v)
        }
    }

    /// Error function, absolute error ≤ 2^−(prec+32).
    ///
    /// Two regimes: below `ERF_CF_SWITCH` a Taylor series at inflated
    /// working precision (the alternating terms peak near exp(z²), so the
    /// inflation covers `z²·log₂e` bits of cancellation); above it,
    /// 1 − erfc(|z|) through the tail continued fraction, where the
    /// subtraction loses nothing because erfc(6) < 2^−55.
    pub fn erf(&mut self, z: &BigFloat) -> BigFloat {
        if z.is_zero() {
            return self.zero();
        }
        let zf = Self::to_f64(z);
        let az = fm::abs(zf);
        if az >= ERF_CF_SWITCH {
            let t = self.erfc_tail(&z.abs());
            let one = self.one();
            let r = self.sub(&one, &t);
            return if zf < 0.0 { r.neg() } else { r };
        }
        let guard = (1.45 * az * az) as usize + 64;
        let wp = self.prec + guard;
        let rm = self.rm;

        let z_w = {
            let mut t = z.clone();
            t.set_precision(wp, rm).expect("precision raise");
            t
        };
        let z2 = z_w.mul(&z_w, wp, rm);
        let mut term = z_w.clone();
        let mut sum = z_w.clone();
        let stop_exp = -((self.prec as i32) + 48);
        let mut n: u64 = 1;
        loop {
            // term_n = term_{n−1} · (−z²) / n
            term = term.mul(&z2, wp, rm).neg();
            term = term.div(&BigFloat::from_u64(n, wp), wp, rm);
            let contrib = term.div(&BigFloat::from_u64(2 * n + 1, wp), wp, rm);
            sum = sum.add(&contrib, wp, rm);
            match Self::exponent(&contrib) {
                Some(e) if e > stop_exp => {}
                _ => break,
            }
            n += 1;
            assert!(n < 100_000, "erf series failed to terminate");
        }
        let pi = self.cc.pi(wp, rm);
        let spi = pi.sqrt(wp, rm);
        let two = BigFloat::from_word(2, wp);
        let mut r = sum.mul(&two, wp, rm).div(&spi, wp, rm);
        r.set_precision(self.prec, rm).expect("precision drop");
        r
    }

    /// Complementary error function. Relative error ≤ 2^−(prec−1) on the
    /// whole axis: the tail continued fraction covers z ≥ `ERF_CF_SWITCH`
    /// (where 1 − erf would cancel catastrophically), and below the switch
    /// the 1 − erf subtraction loses at most the ~55 bits separating erfc
    /// from 1, which the erf guard precision already covers.
    pub fn erfc(&mut self, z: &BigFloat) -> BigFloat {
        let zf = Self::to_f64(z);
        if zf >= ERF_CF_SWITCH {
            return self.erfc_tail(z);
        }
        let e = self.erf(z);
        let one = self.one();
        self.sub(&one, &e)
    }

    /// erfc(z) for z ≥ `ERF_CF_SWITCH` by the classical continued fraction
    ///
    /// ```text
    ///   √π·e^{z²}·erfc(z) = 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ⋯)))),
    /// ```
    ///
    /// evaluated through the forward three-term recurrence for the
    /// approximants p_k/q_k. All recurrence terms are positive for z > 0, so
    /// the evaluation is cancellation-free and the tail keeps full relative
    /// accuracy at any magnitude. Successive approximants differ by
    /// ∏aᵢ/(q_k·q_{k−1}), which drives the stopping rule.
    fn erfc_tail(&mut self, z: &BigFloat) -> BigFloat {
        let wp = self.prec + 64;
        let rm = self.rm;
        let z_w = {
            let mut t = z.clone();
            t.set_precision(wp, rm).expect("precision raise");
            t
        };
        let half = {
            let mut v = BigFloat::from_word(1, wp);
            v.set_exponent(0);
            v
        };
        let mut p_prev = BigFloat::from_word(1, wp); // p_{−1}
        let mut q_prev = BigFloat::from_word(0, wp); // q_{−1}
        let mut p = BigFloat::from_word(0, wp); // p_0 (b_0 = 0)
        let mut q = BigFloat::from_word(1, wp); // q_0
        let mut log2_num = 0.0f64; // log2 ∏ aᵢ
        let mut k: u64 = 1;
        loop {
            // a_1 = 1, a_k = (k−1)/2 afterwards
            let a = if k == 1 {
                BigFloat::from_word(1, wp)
            } else {
                BigFloat::from_u64(k - 1, wp).mul(&half, wp, rm)
            };
            let p_new = z_w.mul(&p, wp, rm).add(&a.mul(&p_prev, wp, rm), wp, rm);
            let q_new = z_w.mul(&q, wp, rm).add(&a.mul(&q_prev, wp, rm), wp, rm);
            p_prev = p;
            q_prev = q;
            p = p_new;
            q = q_new;
            if k > 1 {
                log2_num += fm::ln((k - 1) as f64 / 2.0) / fm::LN_2;
                if let (Some(eq), Some(eq_prev)) = (Self::exponent(&q), Self::exponent(&q_prev)) {
                    if log2_num - (eq as f64 + eq_prev as f64) < -(wp as f64 + 8.0) {
                        break;
                    }
                }
            }
            k += 1;
            assert!(k < 100_000, "erfc continued fraction failed to terminate");
        }
        let kfrac = p.div(&q, wp, rm);
        let gauss = {
            let z2 = z_w.mul(&z_w, wp, rm);
            z2.neg().exp(wp, rm, &mut self.cc)
        };
        let spi = self.cc.pi(wp, rm).sqrt(wp, rm);
        let mut r = gauss.mul(&kfrac, wp, rm).div(&spi, wp, rm);
        r.set_precision(self.prec, rm).expect("precision drop");
        r
    }

    /// Standard normal CDF Φ(x) = (1 + erf(x/√2))/2, absolute error
    /// ≤ 2^−(prec+30); for x below −√2·`ERF_CF_SWITCH` the lower tail is
    /// computed as erfc(−x/√2)/2, keeping full relative accuracy however
    /// deep the tail (the moment integrands multiply such tails by their
    /// exp(+z²)-sized reciprocals, so relative accuracy is what matters).
    pub fn phi(&mut self, x: &BigFloat) -> BigFloat {
        let sqrt2 = self.sqrt2();
        let arg = self.div(x, &sqrt2);
        if Self::to_f64(&arg) <= -ERF_CF_SWITCH {
            let t = self.erfc_tail(&arg.neg());
            return self.div_u64(&t, 2);
        }
        let e = self.erf(&arg);
        let one = self.one();
        let s = self.add(&one, &e);
        self.div_u64(&s, 2)
    }
}

/// Relative difference of two values as a log2 magnitude (f64), for
/// convergence checks. Returns −∞ when the values are bit-identical.
pub fn rel_diff_log2(ctx: &Ctx, new: &BigFloat, old: &BigFloat) -> f64 {
    let d = ctx.sub(new, old);
    match (Ctx::exponent(&d), Ctx::exponent(new)) {
        (None, _) => f64::NEG_INFINITY,
        (Some(ed), Some(en)) => (ed - en) as f64,
        // new == 0 but difference isn't: report absolute exponent
        (Some(ed), None) => ed as f64,
    }
}

/// ∫ f over [center − hw, center + hw] by uniform trapezoid with a dyadic
/// step 2^h_log2, halving the step until two sweeps agree to
/// `target_rel_log2` bits or `max_halvings` is hit.
///
/// For entire integrands with Gaussian decay (every integrand on the exact
/// moment route after substitution) the trapezoid rule on a uniform grid
/// converges geometrically in 1/h, so a handful of halvings reach hundreds
/// of bits. The caller must pick `hw` large enough that the truncated tails
/// are below target; nodes are generated exactly in extended precision so
/// the grid stays exactly uniform.
///
/// Returns (value, achieved relative difference as log2).
pub fn trapezoid_line<F>(
    ctx: &mut Ctx,
    center: f64,
    hw: f64,
    h_log2: i32,
    max_halvings: usize,
    target_rel_log2: f64,
    f: &mut F,
) -> (BigFloat, f64)
where
    F: FnMut(&mut Ctx, &BigFloat) -> BigFloat,
{
    let c = ctx.big(center);
    let mut h_log = h_log2;
    let mut h = exp2_big(ctx, h_log);

    // first sweep at the coarse step
    let mut k_max = (hw / fm::pow(2.0, h_log as f64)).ceil() as i64;
    let mut sum = f(ctx, &c);
    for k in 1..=k_max {
        let off = ctx.mul(&h, &ctx.from_i64(k));
        let xp = ctx.add(&c, &off);
        let xm = ctx.sub(&c, &off);
        let fp = f(ctx, &xp);
        let fmv = f(ctx, &xm);
        sum = ctx.add(&sum, &fp);
        sum = ctx.add(&sum, &fmv);
    }
    let mut value = ctx.mul(&sum, &h);
    let mut achieved = f64::INFINITY;

    for _ in 0..max_halvings {
        // refine: midpoints of the current grid are the odd multiples of h/2
        h_log -= 1;
        h = exp2_big(ctx, h_log);
        k_max = 2 * k_max;
        let mut odd_sum = ctx.zero();
        let mut k = 1;
        while k <= k_max {
            let off = ctx.mul(&h, &ctx.from_i64(k));
            let xp = ctx.add(&c, &off);
            let xm = ctx.sub(&c, &off);
            let fp = f(ctx, &xp);
            let fmv = f(ctx, &xm);
            odd_sum = ctx.add(&odd_sum, &fp);
            odd_sum = ctx.add(&odd_sum, &fmv);
            k += 2;
        }
        sum = ctx.add(&sum, &odd_sum);
        let new_value = ctx.mul(&sum, &h);
        achieved = rel_diff_log2(ctx, &new_value, &value);
        value = new_value;
        if achieved <= target_rel_log2 {
            break;
        }
    }
    (value, achieved)
}

/// tanh-sinh (double-exponential) quadrature on [a, b] for integrands smooth
/// in the interior, with doubling levels until two levels agree to
/// `target_rel_log2` bits. Returns (value, achieved relative difference as
/// log2).
pub fn tanh_sinh<F>(
    ctx: &mut Ctx,
    a: &BigFloat,
    b: &BigFloat,
    max_level: usize,
    target_rel_log2: f64,
    f: &mut F,
) -> (BigFloat, f64)
where
    F: FnMut(&mut Ctx, &BigFloat) -> BigFloat,
{
    let c = {
        let s = ctx.add(a, b);
        ctx.div_u64(&s, 2)
    };
    let hw = {
        let d = ctx.sub(b, a);
        ctx.div_u64(&d, 2)
    };
    let pi = ctx.pi();
    let half_pi = ctx.div_u64(&pi, 2);

    // weights decay like exp(−(π/2)e^τ); stop once they underflow the target
    let tau_max = fm::ln(2.0 * (ctx.prec as f64 + 64.0) * fm::LN_2 / fm::PI) + 0.7;

    // one node: τ ↦ (x, w); x = c + hw·tanh(u), w = hw·(π/2)·cosh τ / cosh²(u)
    // with u = (π/2)·sinh τ
    let eval_at = |ctx: &mut Ctx, tau: &BigFloat, f: &mut F| -> BigFloat {
        let sh = ctx.sinh(tau);
        let ch = ctx.cosh(tau);
        let u = ctx.mul(&half_pi, &sh);
        let th = ctx.tanh(&u);
        let cu = ctx.cosh(&u);
        let cu2 = ctx.mul(&cu, &cu);
        let x = {
            let d = ctx.mul(&hw, &th);
            ctx.add(&c, &d)
        };
        let w = {
            let num = ctx.mul(&ctx.mul(&hw, &half_pi), &ch);
            ctx.div(&num, &cu2)
        };
        let fx = f(ctx, &x);
        ctx.mul(&fx, &w)
    };

    // level 0: step 1/2 over all multiples
    let mut d_log: i32 = -1;
    let mut d = exp2_big(ctx, d_log);
    let mut k_max = (tau_max / fm::pow(2.0, d_log as f64)).ceil() as i64;
    let mut sum = eval_at(ctx, &ctx.zero(), f);
    for k in 1..=k_max {
        let tau = ctx.mul(&d, &ctx.from_i64(k));
        let tp = eval_at(ctx, &tau, f);
        let tm = eval_at(ctx, &tau.neg(), f);
        sum = ctx.add(&sum, &tp);
        sum = ctx.add(&sum, &tm);
    }
    let mut value = ctx.mul(&sum, &d);
    let mut achieved = f64::INFINITY;

    for _ in 1..=max_level {
        d_log -= 1;
        d = exp2_big(ctx, d_log);
        k_max *= 2;
        let mut odd = ctx.zero();
        let mut k = 1;
        while k <= k_max {
            let tau = ctx.mul(&d, &ctx.from_i64(k));
            let tp = eval_at(ctx, &tau, f);
            let tm = eval_at(ctx, &tau.neg(), f);
            odd = ctx.add(&odd, &tp);
            odd = ctx.add(&odd, &tm);
            k += 2;
        }
        sum = ctx.add(&sum, &odd);
        let new_value = ctx.mul(&sum, &d);
        achieved = rel_diff_log2(ctx, &new_value, &value);
        value = new_value;
        if achieved <= target_rel_log2 {
            break;
        }
    }
    (value, achieved)
}

/// tanh-sinh quadrature of several integrands sharing one node set,
/// doubling levels until every component's successive-level agreement
/// reaches `target_rel_log2` bits (or `max_level` is hit). The vector
/// callback fills `out` with all component values at the node. Returns the
/// component values and the worst achieved relative difference (log2).
///
/// Sharing nodes matters when the components reuse most of the per-node
/// work: the skew moment matrices evaluate an entire upper triangle against
/// one set of special-function values per node.
pub fn tanh_sinh_multi<F>(
    ctx: &mut Ctx,
    a: &BigFloat,
    b: &BigFloat,
    max_level: usize,
    target_rel_log2: f64,
    dim: usize,
    f: &mut F,
) -> (Vec<BigFloat>, Vec<f64>)
where
    F: FnMut(&mut Ctx, &BigFloat, &mut [BigFloat]),
{
    let c = {
        let s = ctx.add(a, b);
        ctx.div_u64(&s, 2)
    };
    let hw = {
        let d = ctx.sub(b, a);
        ctx.div_u64(&d, 2)
    };
    let pi = ctx.pi();
    let half_pi = ctx.div_u64(&pi, 2);
    let tau_max = fm::ln(2.0 * (ctx.prec as f64 + 64.0) * fm::LN_2 / fm::PI) + 0.7;

    let mut vals = alloc::vec![ctx.zero(); dim];
    let eval_at = |ctx: &mut Ctx, tau: &BigFloat, sums: &mut [BigFloat], f: &mut F| {
        let sh = ctx.sinh(tau);
        let ch = ctx.cosh(tau);
        let u = ctx.mul(&half_pi, &sh);
        let th = ctx.tanh(&u);
        let cu = ctx.cosh(&u);
        let cu2 = ctx.mul(&cu, &cu);
        let x = {
            let d = ctx.mul(&hw, &th);
            ctx.add(&c, &d)
        };
        let w = {
            let num = ctx.mul(&ctx.mul(&hw, &half_pi), &ch);
            ctx.div(&num, &cu2)
        };
        let mut out = alloc::vec![ctx.zero(); sums.len()];
        f(ctx, &x, &mut out);
        for (s, v) in sums.iter_mut().zip(out.iter()) {
            let t = ctx.mul(v, &w);
            *s = ctx.add(s, &t);
        }
    };

    let mut d_log: i32 = -1;
    let mut d = exp2_big(ctx, d_log);
    let mut k_max = (tau_max / fm::pow(2.0, d_log as f64)).ceil() as i64;
    let mut sums = alloc::vec![ctx.zero(); dim];
    eval_at(ctx, &ctx.zero(), &mut sums, f);
    for k in 1..=k_max {
        let tau = ctx.mul(&d, &ctx.from_i64(k));
        eval_at(ctx, &tau, &mut sums, f);
        eval_at(ctx, &tau.neg(), &mut sums, f);
    }
    for (v, s) in vals.iter_mut().zip(sums.iter()) {
        *v = ctx.mul(s, &d);
    }
    let mut achieved = alloc::vec![f64::INFINITY; dim];

    for _ in 1..=max_level {
        d_log -= 1;
        d = exp2_big(ctx, d_log);
        k_max *= 2;
        let mut odd = alloc::vec![ctx.zero(); dim];
        let mut k = 1;
        while k <= k_max {
            let tau = ctx.mul(&d, &ctx.from_i64(k));
            eval_at(ctx, &tau, &mut odd, f);
            eval_at(ctx, &tau.neg(), &mut odd, f);
            k += 2;
        }
        let mut worst = f64::NEG_INFINITY;
        for i in 0..dim {
            sums[i] = ctx.add(&sums[i], &odd[i]);
            let new_value = ctx.mul(&sums[i], &d);
            achieved[i] = rel_diff_log2(ctx, &new_value, &vals[i]);
            vals[i] = new_value;
            if achieved[i] > worst {
                worst = achieved[i];
            }
        }
        if worst <= target_rel_log2 {
            break;
        }
    }
    (vals, achieved)
}

/// 2^k as an exact BigFloat.
pub fn exp2_big(ctx: &Ctx, k: i32) -> BigFloat {
    let mut v = ctx.one();
    v.set_exponent(1 + k); // one() has exponent 1 (value 0.5·2^1)
    v
}

/// Matrix of extended-precision values with (row, col) indexing.
pub type BigMatrix = Vec<Vec<BigFloat>>;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn f64_round_trip() {
        let ctx = Ctx::new(256);
        for &x in &[
            0.0,
            1.0,
            -1.5,
            3.141592653589793,
            1e-300,
            -2.2250738585072014e-308,
            1e300,
        ] {
            assert_eq!(Ctx::to_f64(&ctx.big(x)), x);
        }
    }

    #[test]
    fn exp2_is_exact() {
        let ctx = Ctx::new(192);
        assert_eq!(Ctx::to_f64(&exp2_big(&ctx, 0)), 1.0);
        assert_eq!(Ctx::to_f64(&exp2_big(&ctx, -3)), 0.125);
        assert_eq!(Ctx::to_f64(&exp2_big(&ctx, 5)), 32.0);
    }

    #[test]
    fn erf_matches_double_precision_reference() {
        let mut ctx = Ctx::new(256);
        for &z in &[
            0.0, 1e-8, 0.1, -0.1, 0.5, 1.0, -1.0, 2.0, 3.5, -3.5, 5.0, 8.0, 11.0, -11.0, 14.5,
            20.0, -20.0,
        ] {
            let got = Ctx::to_f64(&ctx.erf(&ctx.big(z)));
            let want = fm::erf(z);
            assert_relative_eq!(got, want, max_relative = 1e-13, epsilon = 1e-15);
        }
    }

    #[test]
    fn erf_is_precise_beyond_double() {
        // erf(1) to 60 digits (standard reference value)
        let mut ctx = Ctx::new(320);
        let got = ctx.erf(&ctx.big(1.0));
        let want = ctx
            .parse_decimal(
                "8.427007929497148693412206350826092592960669979663029084599378978e-1",
            )
            .unwrap();
        let diff = rel_diff_log2(&ctx, &got, &want);
        assert!(diff < -200.0, "erf(1) relative log2 diff {diff}");
    }

    #[test]
    fn erf_is_precise_beyond_double_in_the_fraction_regime() {
        // erf(7.5) to 90 digits; exercises the continued-fraction branch
        let mut ctx = Ctx::new(320);
        let got = ctx.erf(&ctx.big(7.5));
        let want = ctx
            .parse_decimal(
                "9.99999999999999999999999972233506139694308993360337906775874132603113591042263690186764339e-1",
            )
            .unwrap();
        let diff = rel_diff_log2(&ctx, &got, &want);
        assert!(diff < -250.0, "erf(7.5) relative log2 diff {diff}");
    }

    #[test]
    fn erfc_keeps_relative_accuracy_deep_in_the_tail() {
        let mut ctx = Ctx::new(320);
        // arguments kept exactly representable in binary so the references
        // (computed at the decimal arguments) pin the same points
        for (z, reference) in [
            (
                5.875,
                "9.69155564527717516880045395299411311081983832211568912216797944051344937497171416998983832e-17",
            ),
            (
                9.25,
                "4.20203721491971113453249423445349375316329810572762880745017072363397167661608229111011019e-39",
            ),
            (
                30.0,
                "2.56465620375611160003339727750144714654888972277861705412259958618423869477919735075745592e-393",
            ),
        ] {
            let got = ctx.erfc(&ctx.big(z));
            let want = ctx.parse_decimal(reference).unwrap();
            let diff = rel_diff_log2(&ctx, &got, &want);
            assert!(diff < -250.0, "erfc({z}) relative log2 diff {diff}");
        }
    }

    #[test]
    fn phi_lower_tail_is_relatively_accurate() {
        // Φ(−18) ≈ 1e-72: a clamped erf would return exactly 0 here
        let mut ctx = Ctx::new(320);
        let got = ctx.phi(&ctx.big(-18.0));
        let want = ctx
            .parse_decimal(
                "9.74094891893715048259189518997149858388397964544818537971578010855087364323110774791193696e-73",
            )
            .unwrap();
        let diff = rel_diff_log2(&ctx, &got, &want);
        assert!(diff < -250.0, "Φ(−18) relative log2 diff {diff}");
    }

    #[test]
    fn phi_symmetry() {
        let mut ctx = Ctx::new(256);
        let a = ctx.phi(&ctx.big(0.0));
        assert_relative_eq!(Ctx::to_f64(&a), 0.5, max_relative = 1e-15);
        let p = ctx.phi(&ctx.big(1.3));
        let q = ctx.phi(&ctx.big(-1.3));
        let s = ctx.add(&p, &q);
        assert_relative_eq!(Ctx::to_f64(&s), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn trapezoid_gaussian_moment() {
        // ∫ e^{−x²/2} dx = √(2π), truncated far enough for 256-bit accuracy
        let mut ctx = Ctx::new(256);
        let (v, err) = trapezoid_line(&mut ctx, 0.0, 22.0, -2, 6, -220.0, &mut |c: &mut Ctx,
                                                                                 x: &BigFloat|
         -> BigFloat {
            let x2 = c.mul(x, x);
            let a = c.div_u64(&x2, 2).neg();
            c.exp(&a)
        });
        let want = ctx.sqrt_tau();
        let d = rel_diff_log2(&ctx, &v, &want);
        assert!(d < -200.0, "relative log2 err {d}, reported {err}");
    }

    #[test]
    fn trapezoid_shifted_gaussian() {
        // ∫ e^{−(x−3)²/2}·x dx = 3√(2π)
        let mut ctx = Ctx::new(192);
        let (v, _) = trapezoid_line(&mut ctx, 3.0, 21.0, -2, 6, -170.0, &mut |c: &mut Ctx,
                                                                              x: &BigFloat|
         -> BigFloat {
            let three = c.big(3.0);
            let d = c.sub(x, &three);
            let d2 = c.mul(&d, &d);
            let e = c.exp(&c.div_u64(&d2, 2).neg());
            c.mul(&e, x)
        });
        let st = ctx.sqrt_tau();
        let want = ctx.mul(&ctx.big(3.0), &st);
        let d = rel_diff_log2(&ctx, &v, &want);
        assert!(d < -150.0, "relative log2 err {d}");
    }

    #[test]
    fn tanh_sinh_polynomial_and_sqrt() {
        let mut ctx = Ctx::new(192);
        // ∫_0^1 x² dx = 1/3
        let a = ctx.zero();
        let b = ctx.one();
        let (v, _) = tanh_sinh(&mut ctx, &a, &b, 10, -170.0, &mut |c: &mut Ctx,
                                                                   x: &BigFloat|
         -> BigFloat {
            c.mul(x, x)
        });
        let third = ctx.div_u64(&ctx.one(), 3);
        assert!(rel_diff_log2(&ctx, &v, &third) < -150.0);

        // ∫_0^1 √x dx = 2/3 (endpoint singularity in the derivative)
        let (v2, _) = tanh_sinh(&mut ctx, &a, &b, 10, -170.0, &mut |c: &mut Ctx,
                                                                    x: &BigFloat|
         -> BigFloat {
            c.sqrt(x)
        });
        let want = ctx.div_u64(&ctx.from_u64(2), 3);
        assert!(rel_diff_log2(&ctx, &v2, &want) < -140.0);
    }

    #[test]
    fn decimal_round_trip() {
        let mut ctx = Ctx::new(256);
        let x = ctx.div_u64(&ctx.big(-1.0), 3);
        let s = ctx.to_decimal_string(&x).unwrap();
        let y = ctx.parse_decimal(&s).unwrap();
        let d = rel_diff_log2(&ctx, &y, &x);
        assert!(d < -240.0, "round trip drift {d}");
    }

    #[test]
    fn ln_factorial_matches_f64() {
        let mut ctx = Ctx::new(192);
        let v = Ctx::to_f64(&ctx.ln_factorial(12));
        assert_relative_eq!(v, crate::ensemble::ln_factorial(12), max_relative = 1e-14);
    }
}
