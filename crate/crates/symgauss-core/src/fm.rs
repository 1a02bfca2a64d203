//! Float math shims. The crate is no_std, so every transcendental goes
//! through libm; keeping the imports in one place also makes the call sites
//! uniform.

pub use libm::{
    acos, acosh, asin, atan, cos, cosh, erf, erfc, exp, expm1, fabs as abs, floor, log as ln,
    log1p as ln_1p, pow, scalbn, sin, sinh, sqrt,
};

pub const PI: f64 = core::f64::consts::PI;
pub const LN_2: f64 = core::f64::consts::LN_2;
pub const TAU: f64 = core::f64::consts::TAU;

/// √(2π), used all over the Gaussian-weight algebra.
pub const SQRT_TAU: f64 = 2.506_628_274_631_000_5;

pub fn ln_abs(x: f64) -> f64 {
    ln(abs(x))
}

/// Standard normal density.
pub fn phi_pdf(x: f64) -> f64 {
    exp(-0.5 * x * x) / SQRT_TAU
}

/// Standard normal CDF via erfc for a usable left tail.
pub fn phi_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / core::f64::consts::SQRT_2)
}

/// log sinh x for x > 0 without overflowing cosh/sinh at large x.
pub fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - LN_2 + ln_1p(-exp(-2.0 * x))
    } else {
        ln(sinh(x))
    }
}

/// log |e^a − e^b|, −∞ when a == b.
pub fn ln_abs_diff_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + ln_1p(-exp(lo - hi))
}
