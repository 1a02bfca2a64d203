//! Limiting eigenvalue densities.
//!
//! The Q and SW fields are closed forms; the Siegel field exists only as the
//! numerical solution of its saddle-point equation (see `siegel`), carried
//! here as a Chebyshev expansion of the regular factor of its density.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fm;
use crate::montecarlo::histogram::CdfTable;
use crate::potential::PotentialKind;
use crate::quad::{edge_graded_panels, GaussLegendre};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FieldSource {
    ClosedForm,
    Solver,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Semicircle,
    StieltjesWigert {
        /// e^{−t}, precomputed.
        q: f64,
    },
    /// Regular factor h of ρ = h(λ)·√((b−λ)/(λ−1)) as Chebyshev coefficients
    /// on the affinely mapped support.
    Chebyshev { coeffs: Vec<f64> },
}

/// A normalized limiting density on a compact support.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterField {
    pub kind: PotentialKind,
    pub t: f64,
    pub source: FieldSource,
    support: (f64, f64),
    repr: Repr,
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("'t Hooft parameter must be positive and finite"))
    }
}

/// Semicircle of radius 2√t on [−2√t, 2√t].
pub fn master_field_q(t: f64) -> Result<MasterField> {
    check_t(t)?;
    let r = 2.0 * fm::sqrt(t);
    Ok(MasterField {
        kind: PotentialKind::Q,
        t,
        source: FieldSource::ClosedForm,
        support: (-r, r),
        repr: Repr::Semicircle,
    })
}

/// Support endpoints 2e^{2t} − e^t ∓ 2e^{3t/2}√(e^t − 1), ordered low-high.
/// They are exactly the roots of the square-root argument of the density.
pub fn sw_support(t: f64) -> (f64, f64) {
    let center = 2.0 * fm::exp(2.0 * t) - fm::exp(t);
    let spread = 2.0 * fm::exp(1.5 * t) * fm::sqrt(fm::expm1(t));
    (center - spread, center + spread)
}

/// The positive-cone field at β = 2: density
/// arctan(√(4λ − (1 + e^{−t}λ)²)/(1 + e^{−t}λ))/(πtλ) on [`sw_support`].
pub fn master_field_sw(t: f64) -> Result<MasterField> {
    check_t(t)?;
    Ok(MasterField {
        kind: PotentialKind::Sw,
        t,
        source: FieldSource::ClosedForm,
        support: sw_support(t),
        repr: Repr::StieltjesWigert { q: fm::exp(-t) },
    })
}

impl MasterField {
    /// Solver output: ρ = h(λ)√((b−λ)/(λ−1)) on [1, b], h given by Chebyshev
    /// coefficients in y = (2λ − 1 − b)/(b − 1).
    pub(crate) fn from_chebyshev(t: f64, b: f64, coeffs: Vec<f64>) -> Self {
        MasterField {
            kind: PotentialKind::S,
            t,
            source: FieldSource::Solver,
            support: (1.0, b),
            repr: Repr::Chebyshev { coeffs },
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// ρ(λ); zero outside the support. The Siegel field diverges like
    /// (λ−1)^{−1/2} at its hard edge, so the value at exactly λ = 1 is +∞.
    pub fn density(&self, lambda: f64) -> f64 {
        let (a, b) = self.support;
        if !(a..=b).contains(&lambda) {
            return 0.0;
        }
        match &self.repr {
            Repr::Semicircle => {
                let d = 4.0 * self.t - lambda * lambda;
                fm::sqrt(d.max(0.0)) / (2.0 * fm::PI * self.t)
            }
            Repr::StieltjesWigert { q } => {
                let u = 1.0 + q * lambda;
                let d = 4.0 * lambda - u * u;
                fm::atan(fm::sqrt(d.max(0.0)) / u) / (fm::PI * self.t * lambda)
            }
            Repr::Chebyshev { coeffs } => {
                let y = (2.0 * lambda - 1.0 - b) / (b - 1.0);
                let h = chebyshev_eval(coeffs, y.clamp(-1.0, 1.0));
                h.max(0.0) * fm::sqrt((b - lambda) / (lambda - 1.0))
            }
        }
    }

    /// Numeric ∫ f·ρ over the support, graded into both edges.
    pub fn integrate_against<F: FnMut(f64) -> f64>(&self, f: F) -> f64 {
        self.integrate_against_with(f, 32, 48)
    }

    pub(crate) fn integrate_against_with<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        gl_nodes: usize,
        levels: usize,
    ) -> f64 {
        let gl = GaussLegendre::new(gl_nodes);
        let (a, b) = self.support;
        if let Repr::Chebyshev { coeffs } = &self.repr {
            // λ = 1 + s² regularizes the inverse-sqrt hard edge exactly:
            // ρ(λ)dλ = 2h(λ)√(b−1−s²)ds, bounded on [0, √(b−1)]; evaluated
            // in that form because 1 + s² rounds to the edge for tiny s
            let panels = edge_graded_panels(0.0, fm::sqrt(b - 1.0), levels, 0.45);
            gl.integrate_panels(&panels, |s| {
                let lam = 1.0 + s * s;
                let y = (2.0 * lam - 1.0 - b) / (b - 1.0);
                let h = chebyshev_eval(coeffs, y.clamp(-1.0, 1.0)).max(0.0);
                2.0 * h * fm::sqrt((b - 1.0 - s * s).max(0.0)) * f(lam)
            })
        } else {
            let panels = edge_graded_panels(a, b, levels, 0.45);
            gl.integrate_panels(&panels, |x| self.density(x) * f(x))
        }
    }

    /// ∫ ρ over [lo, hi] ⊂ support, one panel; substituted for hard edges.
    fn slice_mass(&self, lo: f64, hi: f64, gl: &GaussLegendre) -> f64 {
        if let Repr::Chebyshev { coeffs } = &self.repr {
            let (_, b) = self.support;
            let (slo, shi) = (fm::sqrt((lo - 1.0).max(0.0)), fm::sqrt(hi - 1.0));
            gl.integrate(slo, shi, |s| {
                let y = (2.0 * s * s + 1.0 - b) / (b - 1.0);
                let h = chebyshev_eval(coeffs, y.clamp(-1.0, 1.0)).max(0.0);
                2.0 * h * fm::sqrt((b - 1.0 - s * s).max(0.0))
            })
        } else {
            gl.integrate(lo, hi, |x| self.density(x))
        }
    }

    /// Numeric total mass; 1 up to quadrature error for a valid field.
    pub fn mass(&self) -> f64 {
        self.integrate_against(|_| 1.0)
    }

    /// CDF tabulated on a sin²-mapped grid, dense at both support edges
    /// (where the density is singular or vanishing), normalized to end at 1.
    pub fn cdf_table(&self, points: usize) -> Result<CdfTable> {
        if points < 16 {
            return Err(Error::InvalidSpec("CDF table needs at least 16 points".into()));
        }
        let (a, b) = self.support;
        let gl = GaussLegendre::new(8);
        let mut xs = Vec::with_capacity(points);
        for j in 0..points {
            let phi = 0.5 * fm::PI * j as f64 / (points - 1) as f64;
            let s = fm::sin(phi);
            xs.push(a + (b - a) * s * s);
        }
        // the sin² map has zero slope at both ends; force exact endpoints
        xs[0] = a;
        xs[points - 1] = b;
        let mut ps = Vec::with_capacity(points);
        let mut acc = 0.0;
        ps.push(0.0);
        for j in 1..points {
            acc += self.slice_mass(xs[j - 1], xs[j], &gl);
            ps.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::Domain("field has no mass to tabulate"));
        }
        for p in &mut ps {
            *p /= acc;
        }
        CdfTable::new(xs, ps)
    }
}

/// Clenshaw evaluation of Σ c_k T_k(y).
pub(crate) fn chebyshev_eval(coeffs: &[f64], y: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().rev() {
        let b0 = 2.0 * y * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    b1 - y * b2
}
