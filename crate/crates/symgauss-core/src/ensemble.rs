//! Ensemble descriptions and prefactor bookkeeping.
//!
//! A partition function here always has the shape
//!
//! ```text
//!   Z_β(σ) = C_{N,β}(σ) / ((2π)^N N!) · I_β(σ),
//!   I_β(σ) = ∫_{(0,∞)^N} ∏_i exp(−log²u_i/(2σ²)) |Δ(u)|^β du          (PD cones)
//!
//!   Z_S(σ) = vol(U(N)) · 2^{N(N+1)/2} · N! · J(σ),
//!   J(σ)   = ∫_{(1,∞)^N} |Δ(u)| ∏_i exp(−V_S(u_i;σ)) du              (Siegel)
//! ```
//!
//! with `C_{N,β}(σ) = ω_β(N) (2π)^N 2^{−N·N_β} exp(−N N_β² σ²/2)` and
//! `N_β = (β/2)(N−1) + 1`. The constants ω_β(N) and vol(U(N)) are group
//! volumes that depend on the chosen normalization of Haar measure; they are
//! never hard-coded. Every result records the [`PrefactorConvention`] it was
//! produced under, and all cross-route comparisons in this crate are done on
//! the *reduced* values log I_β / log J, which are convention-free.

use crate::error::{Error, Result};
use crate::fm;
use crate::potential::PotentialKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Space {
    PdReal,
    PdComplex,
    PdQuaternion,
    Siegel,
}

impl Space {
    /// Dyson index attached to the space.
    pub fn canonical_beta(self) -> f64 {
        match self {
            Space::PdReal | Space::Siegel => 1.0,
            Space::PdComplex => 2.0,
            Space::PdQuaternion => 4.0,
        }
    }

    /// Radial-coordinate potential of the space.
    pub fn potential_kind(self) -> PotentialKind {
        match self {
            Space::Siegel => PotentialKind::S,
            _ => PotentialKind::Sw,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Space::PdReal => "pdr",
            Space::PdComplex => "pdc",
            Space::PdQuaternion => "pdq",
            Space::Siegel => "siegel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleSpec {
    pub space: Space,
    pub n: usize,
    pub sigma: f64,
    pub beta: f64,
}

impl EnsembleSpec {
    /// Ensemble with the canonical Dyson index of the space.
    pub fn new(space: Space, n: usize, sigma: f64) -> Result<Self> {
        let spec = EnsembleSpec {
            space,
            n,
            sigma,
            beta: space.canonical_beta(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Ensemble with an explicitly generalized β > 0. Finite-N exact routes
    /// only exist at the canonical index; the large-N and sampling routes
    /// accept any positive β.
    pub fn with_beta(space: Space, n: usize, sigma: f64, beta: f64) -> Result<Self> {
        let spec = EnsembleSpec {
            space,
            n,
            sigma,
            beta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("N must be at least 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidSpec("σ must be positive and finite".into()));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidSpec("β must be positive and finite".into()));
        }
        if !self.t().is_finite() {
            return Err(Error::InvalidSpec("t = Nσ² overflows".into()));
        }
        Ok(())
    }

    /// 't Hooft parameter t = Nσ², the quantity held fixed in the large-N
    /// limit.
    pub fn t(&self) -> f64 {
        self.n as f64 * self.sigma * self.sigma
    }

    pub fn has_canonical_beta(&self) -> bool {
        self.beta == self.space.canonical_beta()
    }

    /// N_β = (β/2)(N−1) + 1.
    pub fn n_beta(&self) -> f64 {
        0.5 * self.beta * (self.n as f64 - 1.0) + 1.0
    }
}

/// Values of the paper-level constants left open by the normalization of Haar
/// measure, plus the choice whether reported log-values include the prefactor
/// at all (`false` means the reduced, convention-free integral).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrefactorConvention {
    pub omega_beta_n: f64,
    pub vol_un: f64,
    pub include_prefactor: bool,
}

impl Default for PrefactorConvention {
    fn default() -> Self {
        PrefactorConvention {
            omega_beta_n: 1.0,
            vol_un: 1.0,
            include_prefactor: false,
        }
    }
}

impl PrefactorConvention {
    pub fn validate(&self) -> Result<()> {
        if self.omega_beta_n > 0.0 && self.vol_un > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidSpec(
                "prefactor constants must be strictly positive".into(),
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    ClosedForm,
    SkewPoly,
    MonteCarlo,
    Quadrature,
    LargeN,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::SkewPoly => "skew_poly",
            Method::MonteCarlo => "monte_carlo",
            Method::Quadrature => "quadrature",
            Method::LargeN => "large_n",
        }
    }
}

/// A log-partition-function value with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartitionResult {
    /// log Z (when the convention includes the prefactor) or the reduced
    /// log I_β / log J.
    pub log_value: f64,
    pub method: Method,
    /// Absolute error on `log_value`: a bound for deterministic routes, a
    /// standard error for stochastic ones. Never omitted.
    pub error_estimate: f64,
    pub convention: PrefactorConvention,
}

/// log N! by direct summation; exact to double rounding for any N that fits
/// in memory here.
pub fn ln_factorial(n: usize) -> f64 {
    let mut s = 0.0;
    for k in 2..=n {
        s += fm::ln(k as f64);
    }
    s
}

/// Log of the measure prefactor: `log C_{N,β}(σ)` for the PD cones,
/// `log(vol(U(N)) · 2^{N(N+1)/2} · N!)` for the Siegel space.
pub fn log_prefactor(spec: &EnsembleSpec, conv: &PrefactorConvention) -> Result<f64> {
    spec.validate()?;
    conv.validate()?;
    let n = spec.n as f64;
    match spec.space {
        Space::Siegel => Ok(fm::ln(conv.vol_un)
            + 0.5 * n * (n + 1.0) * fm::LN_2
            + ln_factorial(spec.n)),
        _ => {
            let nb = spec.n_beta();
            Ok(fm::ln(conv.omega_beta_n) + n * fm::ln(fm::TAU) - n * nb * fm::LN_2
                - 0.5 * n * nb * nb * spec.sigma * spec.sigma)
        }
    }
}

/// Reduced → full conversion: what must be added to log I_β (resp. log J) to
/// obtain log Z under the given convention.
pub fn log_prefactor_reduced_to_full(
    spec: &EnsembleSpec,
    conv: &PrefactorConvention,
) -> Result<f64> {
    let pre = log_prefactor(spec, conv)?;
    if spec.space == Space::Siegel {
        // Z = vol · 2^{N(N+1)/2} · N! · J: the prefactor is the whole factor
        Ok(pre)
    } else {
        // Z = C/((2π)^N N!) · I
        Ok(pre - spec.n as f64 * fm::ln(fm::TAU) - ln_factorial(spec.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn canonical_betas() {
        assert_eq!(Space::PdReal.canonical_beta(), 1.0);
        assert_eq!(Space::PdComplex.canonical_beta(), 2.0);
        assert_eq!(Space::PdQuaternion.canonical_beta(), 4.0);
        assert_eq!(Space::Siegel.canonical_beta(), 1.0);
    }

    #[test]
    fn t_parameter() {
        let spec = EnsembleSpec::new(Space::PdComplex, 16, 0.125).unwrap();
        assert_relative_eq!(spec.t(), 0.25, max_relative = 1e-15);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(EnsembleSpec::new(Space::PdReal, 0, 0.5).is_err());
        assert!(EnsembleSpec::new(Space::PdReal, 2, 0.0).is_err());
        assert!(EnsembleSpec::new(Space::PdReal, 2, -1.0).is_err());
        assert!(EnsembleSpec::with_beta(Space::PdReal, 2, 0.5, 0.0).is_err());
    }

    #[test]
    fn prefactor_pdc_n1() {
        // N_2 = 1: C = ω·2π/2·e^{−σ²/2}, so log C = log(2π/2) − 1/2 at σ = 1
        let spec = EnsembleSpec::new(Space::PdComplex, 1, 1.0).unwrap();
        let conv = PrefactorConvention::default();
        let v = log_prefactor(&spec, &conv).unwrap();
        assert_relative_eq!(v, fm::ln(fm::PI) - 0.5, max_relative = 1e-14);
    }

    #[test]
    fn prefactor_siegel_n2() {
        // 2^{N(N+1)/2} = 8 and N! = 2 with vol = 1
        let spec = EnsembleSpec::new(Space::Siegel, 2, 0.5).unwrap();
        let conv = PrefactorConvention::default();
        let v = log_prefactor(&spec, &conv).unwrap();
        assert_relative_eq!(v, fm::ln(16.0), max_relative = 1e-14);
    }

    #[test]
    fn prefactor_pdr_small_sigma_limit() {
        // exponential factor → 1, leaving (2π)²/2³ at N = 2, β = 1 (N_1 = 3/2)
        let spec = EnsembleSpec::new(Space::PdReal, 2, 1e-9).unwrap();
        let conv = PrefactorConvention::default();
        let v = log_prefactor(&spec, &conv).unwrap();
        let expect = fm::ln(fm::TAU * fm::TAU / 8.0);
        assert_relative_eq!(v, expect, max_relative = 1e-9);
    }

    #[test]
    fn prefactor_monotone_decreasing_in_sigma() {
        let conv = PrefactorConvention::default();
        for space in [Space::PdReal, Space::PdComplex, Space::PdQuaternion] {
            let mut prev = f64::INFINITY;
            for k in 1..8 {
                let spec = EnsembleSpec::new(space, 5, 0.2 * k as f64).unwrap();
                let v = log_prefactor(&spec, &conv).unwrap();
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn ln_factorial_small_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert_relative_eq!(ln_factorial(5), fm::ln(120.0), max_relative = 1e-15);
    }
}
