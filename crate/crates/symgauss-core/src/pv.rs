//! Cauchy principal values of equilibrium-measure kernels.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fm;
use crate::quad::{graded_panels, GaussLegendre};

/// Principal value `P ∫_a^b f(x)/(pole − x) dx` for f smooth at the pole,
/// by singularity subtraction:
///
/// ```text
///   P∫ f(x)/(p−x) dx = ∫ (f(x)−f(p))/(p−x) dx + f(p)·log((p−a)/(b−p))
/// ```
///
/// The subtracted integrand is regular at the pole; panels are graded
/// geometrically toward the pole (where cancellation in f(x)−f(p) costs
/// digits only on panels of negligible weight) and toward both endpoints,
/// which keeps integrable edge singularities of equilibrium densities —
/// inverse square roots at hard edges, √ vanishing at soft edges — inside
/// the accuracy budget.
pub fn pv_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pole: f64) -> Result<f64> {
    if !(a < pole && pole < b) {
        return Err(Error::PoleOutsideRange);
    }
    let gl = GaussLegendre::new(32);
    // deep enough that the panel touching an inverse-sqrt hard edge carries
    // ~√(0.5^39) ≈ 1e-6 of mass, putting its quadrature error near 1e-8
    let levels = 40;
    let ratio = 0.5;

    // depth per segment is capped so that the innermost panel stays wide
    // enough for its interior Gauss nodes not to round onto the endpoint,
    // where an edge-singular integrand would evaluate to ±∞
    let capped = |width: f64, at: f64| -> usize {
        let floor_w = 4096.0 * f64::EPSILON * (fm::abs(at) + 1.0);
        let mut l = 1usize;
        let mut inner = width;
        while l < levels && inner * ratio >= floor_w {
            inner *= ratio;
            l += 1;
        }
        l
    };

    let fp = f(pole);
    let g = |x: f64| {
        let d = pole - x;
        // nodes of the deepest panels can round onto the pole; their panel
        // weight is ulp-sized, so dropping them loses nothing
        if d == 0.0 {
            return 0.0;
        }
        (f(x) - fp) / d
    };

    let mut panels: Vec<(f64, f64)> = Vec::new();
    // [a, pole]: grade into a (possible edge singularity) and into the pole
    let mid_l = 0.5 * (a + pole);
    panels.extend(graded_panels(a, mid_l, true, capped(mid_l - a, a), ratio));
    panels.extend(graded_panels(mid_l, pole, false, capped(pole - mid_l, pole), ratio));
    // [pole, b]
    let mid_r = 0.5 * (pole + b);
    panels.extend(graded_panels(pole, mid_r, true, capped(mid_r - pole, pole), ratio));
    panels.extend(graded_panels(mid_r, b, false, capped(b - mid_r, b), ratio));

    let regular = gl.integrate_panels(&panels, g);
    Ok(regular + fp * fm::ln((pole - a) / (b - pole)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn constant_at_center_vanishes() {
        let v = pv_integral(|_| 1.0, -1.0, 1.0, 0.0).unwrap();
        assert!(fm::abs(v) < 1e-12);
    }

    #[test]
    fn linear_example() {
        // P∫_{-1}^{1} x/(0−x) dx = −∫ 1 dx = −2
        let v = pv_integral(|x| x, -1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(v, -2.0, epsilon = 1e-8);
    }

    #[test]
    fn semicircle_hilbert_transform() {
        // density of the radius-2 semicircle; its PV kernel equals λ/2 inside
        let rho = |x: f64| fm::sqrt(4.0 - x * x) / (2.0 * fm::PI);
        let v = pv_integral(rho, -2.0, 2.0, 0.5).unwrap();
        assert_relative_eq!(v, 0.25, epsilon = 1e-8);
    }

    #[test]
    fn pole_outside_rejected() {
        assert_eq!(
            pv_integral(|_| 1.0, 0.0, 1.0, 1.5).unwrap_err(),
            Error::PoleOutsideRange
        );
        assert_eq!(
            pv_integral(|_| 1.0, 0.0, 1.0, 0.0).unwrap_err(),
            Error::PoleOutsideRange
        );
    }

    #[test]
    fn off_center_quadratic() {
        // P∫_0^2 x²/(p−x) dx at p = 0.7: analytic = −p²ln((b−p)/(p−a))·(−1)... do it directly:
        // ∫ (x²−p²)/(p−x) dx = ∫ −(x+p) dx = −(b²−a²)/2 − p(b−a); plus p²·ln((p−a)/(b−p))
        let p = 0.7;
        let exact = -(4.0 - 0.0) / 2.0 - p * 2.0 + p * p * fm::ln(p / (2.0 - p));
        let v = pv_integral(|x| x * x, 0.0, 2.0, p).unwrap();
        assert_relative_eq!(v, exact, epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn linear_in_the_density(c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, p in -0.8f64..0.8) {
            let f1 = |x: f64| fm::exp(-x * x);
            let f2 = |x: f64| x * x * x - 0.3 * x;
            let lhs = pv_integral(|x| c1 * f1(x) + c2 * f2(x), -1.0, 1.0, p).unwrap();
            let rhs = c1 * pv_integral(f1, -1.0, 1.0, p).unwrap()
                + c2 * pv_integral(f2, -1.0, 1.0, p).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()));
        }
    }
}
