//! Log of the Vandermonde repulsion factor.

use crate::fm;

/// `β · Σ_{i<j} log|u_i − u_j|`. Coincident entries make the product vanish;
/// that is signalled by returning `-∞` rather than by an error, since it is a
/// legitimate (log-scale) value of the integrand.
pub fn log_vandermonde(u: &[f64], beta: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            let d = u[i] - u[j];
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            s += fm::ln_abs(d);
        }
    }
    beta * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn singleton_is_zero() {
        assert_eq!(log_vandermonde(&[3.7], 2.0), 0.0);
        assert_eq!(log_vandermonde(&[], 1.0), 0.0);
    }

    #[test]
    fn three_point_example() {
        // |Δ(0,1,2)| = 1·2·1 = 2
        assert_relative_eq!(
            log_vandermonde(&[0.0, 1.0, 2.0], 1.0),
            fm::ln(2.0),
            max_relative = 1e-15
        );
    }

    #[test]
    fn coincident_points_signal_degeneracy() {
        assert_eq!(log_vandermonde(&[1.0, 1.0], 2.0), f64::NEG_INFINITY);
    }

    proptest! {
        #[test]
        fn permutation_invariant(mut xs in proptest::collection::vec(-50.0f64..50.0, 2..6)) {
            let a = log_vandermonde(&xs, 2.0);
            xs.reverse();
            let b = log_vandermonde(&xs, 2.0);
            if a.is_finite() {
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
            } else {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn scaling_shifts_by_pair_count(xs in proptest::collection::vec(0.1f64..10.0, 2..6),
                                        c in 0.5f64..4.0, beta in 0.5f64..4.0) {
            // distinct by construction below
            let mut v = xs.clone();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            prop_assume!(v.len() >= 2);
            let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
            let n = v.len() as f64;
            let expect = log_vandermonde(&v, beta) + beta * n * (n - 1.0) / 2.0 * fm::ln(c);
            let got = log_vandermonde(&scaled, beta);
            prop_assert!((got - expect).abs() <= 1e-8 * (1.0 + expect.abs()));
        }
    }
}
