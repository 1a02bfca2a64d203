//! The three confining potentials that arise in radial coordinates.
//!
//! * `Sw` — the log-normal weight `V(x) = log²x / (2σ²)` on (0, ∞), from the
//!   positive-definite cones. Substituting `x = e^u` turns it Gaussian, which
//!   is how the exact moment computations and the samplers treat it.
//! * `S` — `V(u) = log²(u + √(u²−1)) / (8σ²)` on (1, ∞), from the Siegel
//!   space; substituting `u = cosh θ` makes it Gaussian in θ with dispersion
//!   2σ.
//! * `Q` — the plain Gaussian `V(x) = x² / (2σ²)` on ℝ; the classical
//!   reference case, used as an analytic oracle throughout.

use crate::error::{Error, Result};
use crate::fm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PotentialKind {
    Sw,
    S,
    Q,
}

impl PotentialKind {
    pub fn label(self) -> &'static str {
        match self {
            PotentialKind::Sw => "sw",
            PotentialKind::S => "s",
            PotentialKind::Q => "q",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Potential {
    pub kind: PotentialKind,
}

impl Potential {
    pub fn new(kind: PotentialKind) -> Self {
        Potential { kind }
    }

    /// Open domain of the potential. The S potential additionally admits
    /// evaluation (but not differentiation) at the boundary point 1.
    pub fn domain(&self) -> (f64, f64) {
        match self.kind {
            PotentialKind::Sw => (0.0, f64::INFINITY),
            PotentialKind::S => (1.0, f64::INFINITY),
            PotentialKind::Q => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// V(x; σ). Finite and nonnegative, with minimum value 0 at x = 1
    /// (Sw, S) or x = 0 (Q).
    pub fn eval(&self, x: f64, sigma: f64) -> Result<f64> {
        check_sigma(sigma)?;
        let s2 = sigma * sigma;
        match self.kind {
            PotentialKind::Sw => {
                if !(x > 0.0) {
                    return Err(Error::Domain("Sw potential requires x > 0"));
                }
                let l = fm::ln(x);
                Ok(l * l / (2.0 * s2))
            }
            PotentialKind::S => {
                if !(x >= 1.0) {
                    return Err(Error::Domain("S potential requires x >= 1"));
                }
                // log(x + √(x²−1)) = acosh x, stable down to the edge
                let l = fm::acosh(x);
                Ok(l * l / (8.0 * s2))
            }
            PotentialKind::Q => {
                if !x.is_finite() {
                    return Err(Error::Domain("Q potential requires finite x"));
                }
                Ok(x * x / (2.0 * s2))
            }
        }
    }

    /// dV/dx. For S the derivative diverges as x → 1⁺, so x = 1 itself is
    /// rejected.
    pub fn deriv(&self, x: f64, sigma: f64) -> Result<f64> {
        check_sigma(sigma)?;
        let s2 = sigma * sigma;
        match self.kind {
            PotentialKind::Sw => {
                if !(x > 0.0) {
                    return Err(Error::Domain("Sw potential requires x > 0"));
                }
                Ok(fm::ln(x) / (s2 * x))
            }
            PotentialKind::S => {
                if !(x > 1.0) {
                    return Err(Error::Domain("S derivative requires x > 1"));
                }
                Ok(fm::acosh(x) / (4.0 * s2 * fm::sqrt(x * x - 1.0)))
            }
            PotentialKind::Q => {
                if !x.is_finite() {
                    return Err(Error::Domain("Q potential requires finite x"));
                }
                Ok(x / s2)
            }
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("dispersion must be positive and finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn minima_sit_at_the_documented_points() {
        let sw = Potential::new(PotentialKind::Sw);
        let s = Potential::new(PotentialKind::S);
        let q = Potential::new(PotentialKind::Q);
        assert_eq!(sw.eval(1.0, 0.7).unwrap(), 0.0);
        assert_eq!(s.eval(1.0, 0.7).unwrap(), 0.0);
        assert_eq!(q.eval(0.0, 0.7).unwrap(), 0.0);
        assert_eq!(q.deriv(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(sw.deriv(1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sw_at_e_with_unit_dispersion() {
        let sw = Potential::new(PotentialKind::Sw);
        // second evaluation path: log²(e) = 1 by exp/log inversion
        let direct = sw.eval(core::f64::consts::E, 1.0).unwrap();
        assert_relative_eq!(direct, 0.5, max_relative = 1e-15);
        let l = fm::ln(fm::exp(1.0));
        assert_relative_eq!(direct, l * l / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn sw_derivative_example() {
        let sw = Potential::new(PotentialKind::Sw);
        let d = sw.deriv(2.0, 0.5).unwrap();
        assert_relative_eq!(d, fm::ln(2.0) / (0.25 * 2.0), max_relative = 1e-14);
    }

    #[test]
    fn domain_violations_are_rejected() {
        let sw = Potential::new(PotentialKind::Sw);
        let s = Potential::new(PotentialKind::S);
        assert!(sw.eval(0.0, 1.0).is_err());
        assert!(sw.eval(-1.0, 1.0).is_err());
        assert!(s.eval(0.999_999, 1.0).is_err());
        assert!(s.deriv(1.0, 1.0).is_err());
        assert!(sw.eval(1.0, 0.0).is_err());
    }

    #[test]
    fn s_eval_near_edge_is_finite_and_small() {
        let s = Potential::new(PotentialKind::S);
        let v = s.eval(1.0 + 1e-12, 0.5).unwrap();
        assert!(v >= 0.0 && v < 1e-9);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-6;
        for (kind, xs) in [
            (PotentialKind::Sw, [0.3, 1.7, 4.0]),
            (PotentialKind::S, [1.2, 2.5, 7.0]),
            (PotentialKind::Q, [-1.5, 0.4, 2.0]),
        ] {
            let p = Potential::new(kind);
            for &x in &xs {
                for &sigma in &[0.25, 1.0] {
                    let d = p.deriv(x, sigma).unwrap();
                    let fd = (p.eval(x + h, sigma).unwrap() - p.eval(x - h, sigma).unwrap())
                        / (2.0 * h);
                    assert_relative_eq!(d, fd, max_relative = 1e-6);
                }
            }
        }
    }
}
