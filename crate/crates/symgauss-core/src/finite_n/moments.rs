//! Skew moment matrices in extended precision.
//!
//! The skew product of two monomials against a weight w on domain D is
//!
//! ```text
//!   M[i][j] = ⟨x^i, x^j⟩₁ = 2 ∫∫_{D²} x^i y^j sign(y − x) w(x) w(y) dx dy,
//! ```
//!
//! the ordering inside `sign` chosen so that M[0][1] > 0 (mass at higher y
//! weighted positively). Entries grow like exp(σ²·deg²/2) while everything
//! downstream of them cancels almost all of that growth, hence the extended
//! precision.
//!
//! Each family reduces to one-dimensional integrals of entire functions:
//!
//! * log-normal weight (`Sw`): substituting x = e^{σu} makes both layers
//!   Gaussian; the inner layer is an error function, and the outer is a
//!   uniform-grid trapezoid sum over the real line, which converges
//!   geometrically for such integrands.
//! * Siegel weight (`S`): substituting x = cosh α gives an inner layer that
//!   is a finite combination of Gaussian tail masses (binomial expansion of
//!   cosh^j·sinh against the Gaussian), and an outer integral on [0, T]
//!   handled by tanh-sinh quadrature.
//! * Gaussian weight (`Q`, test oracle only): the inner layer obeys the
//!   classical two-step recurrence of Gaussian partial moments.

use alloc::vec;
use alloc::vec::Vec;

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::fm;
use crate::potential::{Potential, PotentialKind};
use crate::xprec::{exp2_big, tanh_sinh_multi, trapezoid_line, Ctx};

/// Default mantissa size for the exact finite-N route.
pub const DEFAULT_PREC: usize = 256;

/// Documented cap for the skew route; larger N belongs to the large-N
/// asymptotics.
pub const MAX_SKEW_N: usize = 24;

/// Antisymmetric matrix of skew products of monomials, degrees 0..N−1.
#[derive(Debug, Clone)]
pub struct SkewMomentMatrix {
    pub n: usize,
    pub potential: Potential,
    pub sigma: f64,
    /// Mantissa bits the entries were computed with.
    pub prec: usize,
    m: Vec<Vec<BigFloat>>,
    rel_errs: Vec<Vec<f64>>,
    /// Worst per-entry relative quadrature error.
    pub worst_rel_err: f64,
}

impl SkewMomentMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigFloat {
        &self.m[i][j]
    }

    /// Relative quadrature error of entry (i, j).
    pub fn rel_error(&self, i: usize, j: usize) -> f64 {
        self.rel_errs[i][j]
    }

    /// Absolute quadrature error of entry (i, j). May round to infinity for
    /// entries beyond double range; `rel_error` stays finite.
    pub fn abs_error(&self, i: usize, j: usize) -> f64 {
        fm::abs(Ctx::to_f64(&self.m[i][j])) * self.rel_errs[i][j]
    }
}

/// Skew moment matrix at the default 256-bit precision.
pub fn skew_moment_matrix(p: Potential, sigma: f64, n: usize) -> Result<SkewMomentMatrix> {
    skew_moment_matrix_with_prec(p, sigma, n, DEFAULT_PREC)
}

/// Skew moment matrix at an explicit mantissa size.
pub fn skew_moment_matrix_with_prec(
    p: Potential,
    sigma: f64,
    n: usize,
    prec: usize,
) -> Result<SkewMomentMatrix> {
    if p.kind == PotentialKind::Q {
        return Err(Error::Incompatible(
            "skew moment matrices are defined for the Sw and S weights".into(),
        ));
    }
    build_matrix(p, sigma, n, prec)
}

fn build_matrix(p: Potential, sigma: f64, n: usize, prec: usize) -> Result<SkewMomentMatrix> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidSpec(
            "the skew route requires even N ≥ 2".into(),
        ));
    }
    if n > MAX_SKEW_N {
        return Err(Error::TooLarge(alloc::format!(
            "skew route capped at N = {MAX_SKEW_N}; moment growth exp(σ²N²/2) makes larger N \
             unprofitable and the large-N module authoritative"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSpec("σ must be positive and finite".into()));
    }
    if !(64..=8192).contains(&prec) {
        return Err(Error::InvalidSpec(
            "precision must lie in 64..=8192 bits".into(),
        ));
    }

    let mut ctx = Ctx::new(prec);
    let target_log2 = -((prec as f64) - 40.0);
    let mut m = vec![vec![ctx.zero(); n]; n];
    let mut rel_errs = vec![vec![0.0f64; n]; n];
    let mut worst = 0.0f64;
    let mut worst_idx = (0usize, 1usize);
    let mut set_entry =
        |m: &mut Vec<Vec<BigFloat>>, i: usize, j: usize, v: BigFloat, achieved: f64| {
            let frac = fm::pow(2.0, achieved);
            if frac > worst {
                worst = frac;
                worst_idx = (i, j);
            }
            rel_errs[i][j] = frac;
            rel_errs[j][i] = frac;
            m[j][i] = v.neg();
            m[i][j] = v;
        };

    match p.kind {
        PotentialKind::Sw => {
            // the line integral depends on the degrees only through j − i,
            // so one integral per difference serves the whole triangle
            let line: Vec<(BigFloat, f64)> = (1..n)
                .map(|d| sw_line_integral(&mut ctx, sigma, d, target_log2))
                .collect();
            for i in 0..n {
                for j in (i + 1)..n {
                    let (lv, achieved) = &line[j - i - 1];
                    let pre = sw_prefactor(&mut ctx, sigma, i, j);
                    set_entry(&mut m, i, j, ctx.mul(&pre, lv), *achieved);
                }
            }
        }
        PotentialKind::S => {
            let (vals, achs) = s_triangle_integrals(&mut ctx, sigma, n, target_log2);
            let mut idx = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = ctx.mul_u64(&vals[idx], 2);
                    set_entry(&mut m, i, j, v, achs[idx]);
                    idx += 1;
                }
            }
        }
        PotentialKind::Q => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let (v, achieved) = q_entry(&mut ctx, sigma, i, j, target_log2);
                    set_entry(&mut m, i, j, v, achieved);
                }
            }
        }
    }

    let target_frac = fm::pow(2.0, target_log2);
    if worst > target_frac {
        return Err(Error::QuadratureFailure {
            worst: Some(worst_idx),
            achieved: worst,
            target: target_frac,
        });
    }

    Ok(SkewMomentMatrix {
        n,
        potential: p,
        sigma,
        prec,
        m,
        rel_errs,
        worst_rel_err: worst,
    })
}

/// Gaussian-decay half-width giving tails below 2^−(prec+48).
fn gauss_half_width(prec: usize) -> f64 {
    fm::sqrt(2.0 * fm::LN_2 * (prec as f64 + 48.0)) + 2.0
}

/// Log-normal prefactor 2σ²√(2π)·e^{((i+1)²+(j+1)²)σ²/2}.
fn sw_prefactor(ctx: &mut Ctx, sigma: f64, i: usize, j: usize) -> BigFloat {
    let sig = ctx.big(sigma);
    let s2 = ctx.mul(&sig, &sig);
    let q = ((i + 1) * (i + 1) + (j + 1) * (j + 1)) as u64;
    let half_q_s2 = {
        let a = ctx.mul_u64(&s2, q);
        ctx.div_u64(&a, 2)
    };
    let growth = ctx.exp(&half_q_s2);
    let st = ctx.sqrt_tau();
    let a = ctx.mul_u64(&s2, 2);
    let b = ctx.mul(&a, &st);
    ctx.mul(&b, &growth)
}

/// Log-normal line integral for degree difference d = j − i. Substituting
/// x = e^{σu}, y = e^{σv} and integrating out v:
///
/// ```text
///   M[i][j] = sw_prefactor(i, j) · ∫_ℝ e^{−w²/2} (−erf((w − dσ)/√2)) dw,
/// ```
///
/// so the triangle needs one line integral per difference.
fn sw_line_integral(ctx: &mut Ctx, sigma: f64, d: usize, target_log2: f64) -> (BigFloat, f64) {
    let sig = ctx.big(sigma);
    let delta = ctx.mul_u64(&sig, d as u64);
    let sqrt2 = ctx.sqrt2();
    let hw = gauss_half_width(ctx.prec);
    trapezoid_line(ctx, 0.0, hw, -2, 10, target_log2, &mut |c: &mut Ctx,
                                                            w: &BigFloat|
     -> BigFloat {
        let w2 = c.mul(w, w);
        let e_arg = c.div_u64(&w2, 2).neg();
        let gauss = c.exp(&e_arg);
        let shifted = c.sub(w, &delta);
        let erf_arg = c.div(&shifted, &sqrt2);
        let e = c.erf(&erf_arg).neg();
        c.mul(&gauss, &e)
    })
}

/// All Siegel upper-triangle integrals in one shared tanh-sinh sweep, in
/// row-major pair order; entries are twice these values.
///
/// Substituting x = cosh α with s = 2σ, the layers are g_k(α) =
/// cosh^k α·sinh α·e^{−α²/(2s²)}, whose partial masses G_k follow from the
/// binomial expansion of cosh^k·sinh into exponentials:
///
/// ```text
///   ∫_0^α e^{cβ − β²/(2s²)} dβ = s√(2π)·e^{c²s²/2}·(Φ((α−cs²)/s) − Φ(−cs)),
///   M[i][j] = 2 ∫_0^∞ g_i(α)·(G_j(∞) − 2G_j(α)) dα.
/// ```
///
/// Per node the Φ values depend only on the exponent c, never on the pair,
/// so the whole triangle costs barely more than one entry.
fn s_triangle_integrals(
    ctx: &mut Ctx,
    sigma: f64,
    n: usize,
    target_log2: f64,
) -> (Vec<BigFloat>, Vec<f64>) {
    let s_f = 2.0 * sigma;
    let sb = ctx.big(s_f);
    let s2b = ctx.mul(&sb, &sb);
    let st = ctx.sqrt_tau();

    // distinct exponents c of cosh^j·sinh across all j: c ≡ j+1 (mod 2),
    // 0 < |c| ≤ n; per c keep A_c = s√(2π)e^{c²s²/2} scaled shift and tail
    struct CTerm {
        a_c: BigFloat,
        b_c: BigFloat,   // Φ(−cs)
        mass: BigFloat,  // A_c·Φ(cs)
        shift: BigFloat, // cs²
    }
    let mut cterms: Vec<Option<CTerm>> = (0..=(2 * n)).map(|_| None).collect(); // index c + n
    // per second-degree j: the list (c index, γ·A_c) with γ from the
    // binomial expansion 2^{−j−1}·Σ_l C(j,l)(e^{(2l−j+1)α} − e^{(2l−j−1)α}),
    // plus the full mass G_j(∞)
    let mut rows: Vec<(Vec<(usize, BigFloat)>, BigFloat)> = Vec::with_capacity(n);
    for j in 0..n {
        let mut int_coef = vec![0i64; j + 2]; // index (c + j + 1)/2
        for l in 0..=j {
            let b = binomial(j, l) as i64;
            int_coef[l + 1] += b; // c = 2l − j + 1
            int_coef[l] -= b; // c = 2l − j − 1
        }
        let scale = exp2_big(ctx, -(j as i32) - 1);
        let mut row: Vec<(usize, BigFloat)> = Vec::new();
        let mut g_inf = ctx.zero();
        for (idx, &w) in int_coef.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let c = 2 * (idx as i64) - (j as i64) - 1;
            let ci = (c + n as i64) as usize;
            if cterms[ci].is_none() {
                let a_c = {
                    let c2 = ctx.from_i64(c * c);
                    let ex = {
                        let a = ctx.mul(&c2, &s2b);
                        ctx.div_u64(&a, 2)
                    };
                    let e = ctx.exp(&ex);
                    let sst = ctx.mul(&sb, &st);
                    ctx.mul(&sst, &e)
                };
                let cs = {
                    let cb = ctx.from_i64(c);
                    ctx.mul(&cb, &sb)
                };
                let b_c = {
                    let neg = cs.neg();
                    ctx.phi(&neg)
                };
                let mass = {
                    let p = ctx.phi(&cs);
                    ctx.mul(&a_c, &p)
                };
                let shift = {
                    let cb = ctx.from_i64(c);
                    ctx.mul(&cb, &s2b)
                };
                cterms[ci] = Some(CTerm { a_c, b_c, mass, shift });
            }
            let term = cterms[ci].as_ref().unwrap();
            let gamma = {
                let wi = ctx.from_i64(w);
                ctx.mul(&wi, &scale)
            };
            let gamma_a = ctx.mul(&gamma, &term.a_c);
            let mc = ctx.mul(&gamma, &term.mass);
            g_inf = ctx.add(&g_inf, &mc);
            row.push((ci, gamma_a));
        }
        rows.push((row, g_inf));
    }

    // outer decay: the widest g_i peaks at (n−1)s² with Gaussian width s
    let t_end =
        (n as f64 - 1.0) * s_f * s_f + s_f * fm::sqrt(2.0 * fm::LN_2 * (ctx.prec as f64 + 64.0));
    let zero = ctx.zero();
    let upper = ctx.big(t_end);
    let two_s2 = ctx.mul_u64(&s2b, 2);
    let pairs = n * (n - 1) / 2;

    tanh_sinh_multi(ctx, &zero, &upper, 14, target_log2, pairs, &mut |c: &mut Ctx,
                                                                      alpha: &BigFloat,
                                                                      out: &mut [BigFloat]| {
        let ch = c.cosh(alpha);
        let sh = c.sinh(alpha);
        let a2 = c.mul(alpha, alpha);
        let g_arg = c.div(&a2, &two_s2).neg();
        let gauss = c.exp(&g_arg);
        let sh_gauss = c.mul(&sh, &gauss);
        // g_i = cosh^i·sinh·gauss, built incrementally over i
        let mut g = Vec::with_capacity(n - 1);
        let mut chp = c.one();
        for i in 0..(n - 1) {
            if i > 0 {
                chp = c.mul(&chp, &ch);
            }
            g.push(c.mul(&chp, &sh_gauss));
        }
        // Φ once per distinct exponent
        let s_c: Vec<Option<BigFloat>> = cterms
            .iter()
            .map(|t| {
                t.as_ref().map(|term| {
                    let num = c.sub(alpha, &term.shift);
                    let arg = c.div(&num, &sb);
                    let p = c.phi(&arg);
                    c.sub(&p, &term.b_c)
                })
            })
            .collect();
        // bracket_j = G_j(∞) − 2G_j(α), once per second degree
        let brackets: Vec<BigFloat> = rows
            .iter()
            .map(|(row, g_inf)| {
                let mut g_alpha = c.zero();
                for (ci, gamma_a) in row {
                    let contrib = c.mul(gamma_a, s_c[*ci].as_ref().expect("term present"));
                    g_alpha = c.add(&g_alpha, &contrib);
                }
                let twice = c.mul_u64(&g_alpha, 2);
                c.sub(g_inf, &twice)
            })
            .collect();
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                out[idx] = c.mul(&g[i], &brackets[j]);
                idx += 1;
            }
        }
    })
}

/// Gaussian-weight entry on ℝ (test oracle), j > i. The partial moments
/// F_k(x) = ∫_{−∞}^x y^k e^{−y²/(2σ²)} dy obey
/// F_k = −σ²x^{k−1}e^{−x²/(2σ²)} + (k−1)σ²F_{k−2} with
/// F_0 = σ√(2π)Φ(x/σ), F_1 = −σ²e^{−x²/(2σ²)}.
fn q_entry(ctx: &mut Ctx, sigma: f64, i: usize, j: usize, target_log2: f64) -> (BigFloat, f64) {
    // the weight is even, so (x, y) → (−x, −y) kills every entry with i + j
    // even; quadrature on an exact zero would never converge relatively
    if (i + j) % 2 == 0 {
        return (ctx.zero(), target_log2);
    }
    let sig = ctx.big(sigma);
    let s2 = ctx.mul(&sig, &sig);
    let st = ctx.sqrt_tau();

    // F_j(∞): zero for odd j, (j−1)!!·σ^{j+1}√(2π) for even j
    let f_inf = if j % 2 == 1 {
        ctx.zero()
    } else {
        let mut v = ctx.mul(&sig, &st);
        let mut k = 2;
        while k <= j {
            let a = ctx.mul_u64(&s2, (k - 1) as u64);
            v = ctx.mul(&v, &a);
            k += 2;
        }
        v
    };

    let hw = sigma * (gauss_half_width(ctx.prec) + (i + j) as f64 + 3.0);
    let h_log2 = fm::floor(fm::ln(sigma / 4.0) / fm::LN_2) as i32;

    let (val, achieved) = trapezoid_line(ctx, 0.0, hw, h_log2, 10, target_log2, &mut |c: &mut Ctx,
                                                                                      x: &BigFloat|
     -> BigFloat {
        let x2 = c.mul(x, x);
        let e_arg = {
            let t = c.mul_u64(&s2, 2);
            c.div(&x2, &t).neg()
        };
        let gauss = c.exp(&e_arg);
        // climb the recurrence to F_j(x)
        let f_j = if j == 0 {
            let a = c.div(x, &sig);
            let p = c.phi(&a);
            let b = c.mul(&sig, &st);
            c.mul(&b, &p)
        } else {
            let mut prev2 = {
                let a = c.div(x, &sig);
                let p = c.phi(&a);
                let b = c.mul(&sig, &st);
                c.mul(&b, &p)
            }; // F_0
            let mut prev = c.mul(&s2, &gauss).neg(); // F_1
            if j == 1 {
                prev
            } else {
                let mut k = 2;
                loop {
                    let xp = c.powi(x, k - 1);
                    let lead = {
                        let a = c.mul(&s2, &xp);
                        c.mul(&a, &gauss).neg()
                    };
                    let tail = {
                        let a = c.mul_u64(&s2, (k - 1) as u64);
                        c.mul(&a, &prev2)
                    };
                    let f_k = c.add(&lead, &tail);
                    prev2 = prev;
                    prev = f_k;
                    if k == j {
                        break;
                    }
                    k += 1;
                }
                prev
            }
        };
        let xi = if i == 0 { c.one() } else { c.powi(x, i) };
        let bracket = {
            let twice = c.mul_u64(&f_j, 2);
            c.sub(&f_inf, &twice)
        };
        let a = c.mul(&xi, &gauss);
        c.mul(&a, &bracket)
    });
    (ctx.mul_u64(&val, 2), achieved)
}

/// Gaussian-weight moment matrix for tests of the elimination stage.
#[cfg(test)]
pub(crate) fn q_moment_matrix(sigma: f64, n: usize, prec: usize) -> SkewMomentMatrix {
    build_matrix(Potential::new(PotentialKind::Q), sigma, n, prec).expect("Q oracle matrix")
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut c: u64 = 1;
    for l in 0..k {
        c = c * (n - l) as u64 / (l + 1) as u64;
    }
    c
}
