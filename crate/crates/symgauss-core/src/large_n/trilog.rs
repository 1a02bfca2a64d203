//! The trilogarithm on [−1, 1].

use crate::error::{Error, Result};
use crate::fm;

/// Li₃(x) = Σ_{k≥1} x^k/k³ for |x| ≤ 1, summed with a rigorous tail bound of
/// 1e-14 or better in every branch:
///
/// * |x| < 1: the tail beyond K is majorized by the geometric series
///   |x|^{K+1}/((K+1)³(1−|x|));
/// * x = 1: p-series summed to an explicit K with tail < 1/(2K²), added
///   smallest-terms-first so rounding stays below the truncation error;
/// * x = −1: alternating series, tail bounded by the first omitted term.
pub fn trilog(x: f64) -> Result<f64> {
    if !(x.is_finite() && (-1.0..=1.0).contains(&x)) {
        return Err(Error::Domain("trilogarithm series needs |x| <= 1"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        // tail < 1/(2K²) = 9.6e-15
        const K: u64 = 7_200_000;
        let mut s = 0.0;
        for k in (1..=K).rev() {
            let kf = k as f64;
            s += 1.0 / (kf * kf * kf);
        }
        return Ok(s);
    }
    if x == -1.0 {
        // first omitted term 8e-15
        const K: u64 = 50_000;
        let mut s = 0.0;
        for k in (1..=K).rev() {
            let kf = k as f64;
            let term = 1.0 / (kf * kf * kf);
            s = if k % 2 == 0 { s + term } else { s - term };
        }
        return Ok(s);
    }
    let ax = fm::abs(x);
    let mut s = 0.0;
    let mut pow = 1.0;
    let mut k = 1u64;
    loop {
        pow *= x;
        let kf = k as f64;
        s += pow / (kf * kf * kf);
        let kn = kf + 1.0;
        let tail = fm::abs(pow) * ax / (kn * kn * kn * (1.0 - ax));
        if tail < 1e-15 {
            break;
        }
        k += 1;
    }
    Ok(s)
}

/// ζ(3), computed by [`trilog`] at 1 rather than stored as a literal.
pub fn zeta3() -> f64 {
    trilog(1.0).expect("1 is inside the trilog domain")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_the_empty_sum() {
        assert_eq!(trilog(0.0).unwrap(), 0.0);
    }

    #[test]
    fn value_at_one_is_aperys_constant() {
        // reference digits from the standard tabulation of ζ(3)
        assert!((zeta3() - 1.202_056_903_159_594_3).abs() < 1e-12);
    }

    #[test]
    fn value_at_minus_one_is_minus_three_quarters_zeta3() {
        let got = trilog(-1.0).unwrap();
        assert!((got + 0.75 * zeta3()).abs() < 1e-13);
    }

    #[test]
    fn half_agrees_with_the_closed_form() {
        // Li₃(1/2) = (4 ln³2 − 2π² ln2 + 21 ζ(3))/24
        let l2 = fm::ln(2.0);
        let expect = (4.0 * l2 * l2 * l2 - 2.0 * fm::PI * fm::PI * l2 + 21.0 * zeta3()) / 24.0;
        assert!((trilog(0.5).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn interior_points_match_brute_force_summation() {
        for &x in &[0.9f64, 0.3, -0.6, -0.97] {
            let mut brute = 0.0;
            for k in (1..=1_000_000u64).rev() {
                let kf = k as f64;
                brute += fm::pow(x, kf) / (kf * kf * kf);
            }
            assert!(
                (trilog(x).unwrap() - brute).abs() < 1e-13,
                "mismatch at {x}"
            );
        }
    }

    #[test]
    fn partial_sums_lower_bound_positive_arguments() {
        // every omitted term is positive on (0,1)
        let mut x = 0.05;
        while x < 1.0 {
            let v = trilog(x).unwrap();
            assert!(v - x - x * x / 8.0 - x * x * x / 27.0 >= 0.0, "at {x}");
            x += 0.05;
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(trilog(1.0 + 1e-12).is_err());
        assert!(trilog(-1.5).is_err());
        assert!(trilog(f64::NAN).is_err());
    }
}
