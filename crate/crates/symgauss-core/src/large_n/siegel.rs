//! Numerical master field of the Siegel ensemble.
//!
//! No closed form is known, so the limiting density is found from its
//! saddle-point equation
//!
//! ```text
//!   acosh λ / (4t√(λ²−1)) = PV ∫_1^b ρ(μ)/(λ−μ) dμ,   λ ∈ (1, b),
//! ```
//!
//! with a hard edge pinned at 1 and a soft edge at an unknown b. The ansatz
//! ρ(λ) = h(λ)·√((b−λ)/(λ−1)) builds both edge behaviors in; h is expanded
//! in Chebyshev polynomials of y = (2λ−1−b)/(b−1).
//!
//! Mapping the kernel to y shows the collocation matrix
//!
//! ```text
//!   A[j][k] = PV ∫_{−1}^{1} T_k(y′)·√((1−y′)/(1+y′))/(y_j − y′) dy′
//! ```
//!
//! does not depend on b at all: the edge enters only through the force side
//! and the normalization. That splits the solve into a linear least-squares
//! problem for the coefficients at fixed b and a one-dimensional root find
//! in b for unit mass, which is where the iteration count below comes from.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fm;
use crate::large_n::master_field::{chebyshev_eval, MasterField};
use crate::pv::pv_integral;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SiegelSolveReport {
    /// Soft support edge.
    pub b: f64,
    /// Root-find steps spent locating b.
    pub newton_iterations: usize,
    /// Largest collocation-point residual of the saddle equation.
    pub final_residual: f64,
    /// |∫ρ − 1| re-measured by graded quadrature, independent of the
    /// normalization identity enforced during the solve.
    pub mass_defect: f64,
    pub basis_size: usize,
    pub collocation: usize,
}

/// T_k on [−1, 1].
fn cheb_t(k: usize, y: f64) -> f64 {
    fm::cos(k as f64 * fm::acos(y.clamp(-1.0, 1.0)))
}

/// One entry of the collocation matrix,
/// PV∫ T_k(y′)√((1−y′)/(1+y′))/(y−y′)dy′, computed after y′ = 2s²−1.
/// That substitution cancels the inverse square root of the weight, leaving
/// a smooth integrand with a plain simple pole at s = √((1+y)/2):
///
/// ```text
///   PV ∫_0^1 2√(1−s²)·T_k(2s²−1)/((s_y − s)(s_y + s)) ds
/// ```
fn kernel_entry(k: usize, y: f64) -> Result<f64> {
    let sy = fm::sqrt((1.0 + y) / 2.0);
    pv_integral(
        |s| 2.0 * fm::sqrt((1.0 - s * s).max(0.0)) * cheb_t(k, 2.0 * s * s - 1.0) / (sy + s),
        0.0,
        1.0,
        sy,
    )
}

/// Confining side of the saddle equation; analytic across the hard edge.
fn force(t: f64, lambda: f64) -> f64 {
    fm::acosh(lambda) / (4.0 * t * fm::sqrt(lambda * lambda - 1.0))
}

/// Least squares by Householder QR; `a` is rows × cols with rows ≥ cols.
fn lstsq(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
    let rows = a.len();
    let cols = a[0].len();
    for k in 0..cols {
        let mut norm = 0.0;
        for row in a.iter().skip(k) {
            norm += row[k] * row[k];
        }
        norm = fm::sqrt(norm);
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v = vec![0.0; rows - k];
        v[0] = a[k][k] - alpha;
        for i in k + 1..rows {
            v[i - k] = a[i][k];
        }
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        for j in k..cols {
            let mut dot = 0.0;
            for i in k..rows {
                dot += v[i - k] * a[i][j];
            }
            let s = 2.0 * dot / vtv;
            for i in k..rows {
                a[i][j] -= s * v[i - k];
            }
        }
        let mut dot = 0.0;
        for i in k..rows {
            dot += v[i - k] * rhs[i];
        }
        let s = 2.0 * dot / vtv;
        for i in k..rows {
            rhs[i] -= s * v[i - k];
        }
    }
    let mut c = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = rhs[k];
        for j in k + 1..cols {
            s -= a[k][j] * c[j];
        }
        c[k] = if a[k][k] != 0.0 { s / a[k][k] } else { 0.0 };
    }
    c
}

/// The expansion must stay pointwise nonnegative for ρ to be a density;
/// ripples below a relative floor are reported with their location.
fn check_positivity(coeffs: &[f64], b: f64) -> Result<()> {
    // interior scan; the exact edges map to λ = 1 (where the reported
    // density value would be infinite) and λ = b
    let grid = |i: usize| -1.0 + 2.0 * (i as f64 + 0.5) / 512.0;
    let mut h_max = 0.0f64;
    for i in 0..512 {
        h_max = h_max.max(chebyshev_eval(coeffs, grid(i)));
    }
    for i in 0..512 {
        let y = grid(i);
        let h = chebyshev_eval(coeffs, y);
        if h < -1e-7 * h_max {
            let lambda = 1.0 + (b - 1.0) * (y + 1.0) / 2.0;
            let edge = fm::sqrt(((b - lambda) / (lambda - 1.0)).max(0.0));
            return Err(Error::NegativeDensity {
                lambda,
                value: h * edge,
            });
        }
    }
    Ok(())
}

/// Solve the Siegel saddle equation at coupling t with `basis_size` Chebyshev
/// modes collocated at `collocation` points.
pub fn siegel_saddle_solve(
    t: f64,
    basis_size: usize,
    collocation: usize,
) -> Result<(MasterField, SiegelSolveReport)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain("'t Hooft parameter must be positive and finite"));
    }
    if basis_size < 4 {
        return Err(Error::InvalidSpec(
            "basis needs at least 4 Chebyshev modes to resolve the edge profile".into(),
        ));
    }
    if collocation < basis_size {
        return Err(Error::Incompatible(alloc::format!(
            "{collocation} collocation points cannot determine {basis_size} modes"
        )));
    }
    if basis_size > 64 || collocation > 512 {
        return Err(Error::TooLarge(
            "basis is capped at 64 modes and collocation at 512 points".into(),
        ));
    }

    // interior Chebyshev nodes; the transform of the kernel is singular at
    // the mapped edges, never at these
    let nodes: Vec<f64> = (0..collocation)
        .map(|j| fm::cos(fm::PI * (2.0 * j as f64 + 1.0) / (2.0 * collocation as f64)))
        .collect();

    let mut a = vec![vec![0.0; basis_size]; collocation];
    for (j, &yj) in nodes.iter().enumerate() {
        for (k, entry) in a[j].iter_mut().enumerate() {
            *entry = kernel_entry(k, yj)?;
        }
    }

    // coefficients at fixed b: collocate force(λ_j(b)) and solve in the
    // least-squares sense (rows ≥ modes)
    let solve_at = |b: f64| -> Vec<f64> {
        let rhs: Vec<f64> = nodes
            .iter()
            .map(|&y| force(t, 1.0 + (b - 1.0) * (y + 1.0) / 2.0))
            .collect();
        lstsq(a.clone(), rhs)
    };
    // ∫ρ − 1 from the exact moments ∫w·T₀ = π, ∫w·T₁ = −π/2 of the weight
    let mass_defect_at = |b: f64, c: &[f64]| -> f64 {
        let c1 = if c.len() > 1 { c[1] } else { 0.0 };
        fm::PI * (b - 1.0) * (c[0] - 0.5 * c1) / 2.0 - 1.0
    };
    let g = |b: f64| -> f64 {
        let c = solve_at(b);
        mass_defect_at(b, &c)
    };

    // bracket the unit-mass edge: mass vanishes as b → 1⁺ and grows with
    // the support, starting from the weak-coupling estimate b ≈ 1 + 8t
    let mut history = Vec::new();
    let mut lo = 1.0 + 8.0 * t;
    let mut g_lo = g(lo);
    history.push(fm::abs(g_lo));
    let mut iterations = 1usize;
    while g_lo > 0.0 {
        lo = 1.0 + (lo - 1.0) / 1.6;
        g_lo = g(lo);
        history.push(fm::abs(g_lo));
        iterations += 1;
        if iterations > 80 {
            return Err(Error::NewtonFailure {
                residual_history: history,
            });
        }
    }
    let mut hi = 1.0 + (lo - 1.0) * 1.6;
    let mut g_hi = g(hi);
    history.push(fm::abs(g_hi));
    iterations += 1;
    while g_hi < 0.0 {
        lo = hi;
        g_lo = g_hi;
        hi = 1.0 + (hi - 1.0) * 1.6;
        g_hi = g(hi);
        history.push(fm::abs(g_hi));
        iterations += 1;
        if iterations > 80 {
            return Err(Error::NewtonFailure {
                residual_history: history,
            });
        }
    }

    // secant steps safeguarded by the bracket, bisection as fallback
    let mut b = hi;
    let mut converged = false;
    for _ in 0..40 {
        let secant = if g_hi != g_lo {
            hi - g_hi * (hi - lo) / (g_hi - g_lo)
        } else {
            0.5 * (lo + hi)
        };
        b = if secant > lo && secant < hi {
            secant
        } else {
            0.5 * (lo + hi)
        };
        let g_b = g(b);
        history.push(fm::abs(g_b));
        iterations += 1;
        if g_b < 0.0 {
            lo = b;
            g_lo = g_b;
        } else {
            hi = b;
            g_hi = g_b;
        }
        if fm::abs(g_b) < 1e-12 || hi - lo < 1e-13 * (b - 1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NewtonFailure {
            residual_history: history,
        });
    }

    let coeffs = solve_at(b);
    check_positivity(&coeffs, b)?;

    let mut final_residual = 0.0f64;
    for (j, &yj) in nodes.iter().enumerate() {
        let mut lhs = 0.0;
        for (k, &c) in coeffs.iter().enumerate() {
            lhs += c * a[j][k];
        }
        let lambda = 1.0 + (b - 1.0) * (yj + 1.0) / 2.0;
        final_residual = final_residual.max(fm::abs(lhs - force(t, lambda)));
    }

    let field = MasterField::from_chebyshev(t, b, coeffs);
    let mass_defect = fm::abs(field.mass() - 1.0);
    let report = SiegelSolveReport {
        b,
        newton_iterations: iterations,
        final_residual,
        mass_defect,
        basis_size,
        collocation,
    };
    Ok((field, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::large_n::saddle::saddle_residual;

    /// U_{k−1}(y) by recurrence; U_{−1} = 0.
    fn cheb_u(k: isize, y: f64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        let (mut u0, mut u1) = (1.0, 2.0 * y);
        match k {
            0 => u0,
            1 => u1,
            _ => {
                for _ in 2..=k {
                    let u2 = 2.0 * y * u1 - u0;
                    u0 = u1;
                    u1 = u2;
                }
                u1
            }
        }
    }

    #[test]
    fn collocation_matrix_matches_the_analytic_transform() {
        // PV∫ √((1−y′)/(1+y′)) T_k(y′)/(y−y′) dy′ is π for k = 0 and
        // −π(1−y)U_{k−1}(y) beyond; the quadrature route must agree
        for &y in &[-0.83, -0.21, 0.4, 0.95] {
            for k in 0..6usize {
                let got = kernel_entry(k, y).unwrap();
                let want = if k == 0 {
                    fm::PI
                } else {
                    -fm::PI * (1.0 - y) * cheb_u(k as isize - 1, y)
                };
                assert!(
                    fm::abs(got - want) < 1e-8,
                    "k {k}, y {y}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn solved_edge_matches_reference_values() {
        let (_, r1) = siegel_saddle_solve(0.1, 16, 32).unwrap();
        assert!(
            fm::abs(r1.b - 1.983649395) < 2e-4 * r1.b,
            "b(0.1) = {}",
            r1.b
        );
        let (_, r2) = siegel_saddle_solve(0.25, 16, 32).unwrap();
        assert!(
            fm::abs(r2.b - 4.436563657) < 2e-4 * r2.b,
            "b(0.25) = {}",
            r2.b
        );
    }

    #[test]
    fn edge_creeps_toward_the_hard_wall_at_weak_coupling() {
        let bs: Vec<f64> = [0.01, 0.05, 0.1, 0.25]
            .iter()
            .map(|&t| siegel_saddle_solve(t, 12, 24).unwrap().1.b)
            .collect();
        for w in bs.windows(2) {
            assert!(w[0] < w[1]);
        }
        // the confining force approaches the constant 1/(4t) there, whose
        // equilibrium has width exactly 8t
        assert!(fm::abs((bs[0] - 1.0) / 0.08 - 1.0) < 0.2, "b(0.01) = {}", bs[0]);
    }

    #[test]
    fn solution_is_stable_under_basis_refinement() {
        let (f1, r1) = siegel_saddle_solve(0.25, 16, 32).unwrap();
        let (f2, r2) = siegel_saddle_solve(0.25, 24, 48).unwrap();
        assert!(fm::abs(r1.b - r2.b) < 1e-6 * r1.b);
        let probe = 1.0 + 0.37 * (r1.b - 1.0);
        assert!(fm::abs(f1.density(probe) - f2.density(probe)) < 1e-6);
    }

    #[test]
    fn report_reflects_a_converged_solution() {
        let (field, report) = siegel_saddle_solve(0.25, 16, 32).unwrap();
        assert!(report.mass_defect < 1e-8, "mass defect {}", report.mass_defect);
        assert!(report.final_residual < 1e-6, "residual {}", report.final_residual);
        assert!(report.newton_iterations >= 2);
        assert!(report.b > 1.0);
        let (a, b) = field.support();
        assert_eq!(a, 1.0);
        assert_eq!(b, report.b);
    }

    #[test]
    fn off_collocation_residual_is_small_by_the_independent_route() {
        for t in [0.1, 0.25] {
            let (field, _) = siegel_saddle_solve(t, 16, 32).unwrap();
            let (a, b) = field.support();
            let probes: Vec<f64> = (1..=10)
                .map(|k| a + (b - a) * (0.05 + 0.9 * (k - 1) as f64 / 9.0))
                .collect();
            let res = saddle_residual(&field, 1.0, &probes).unwrap();
            for (p, r) in probes.iter().zip(&res) {
                assert!(fm::abs(*r) < 1e-4, "residual {r} at {p}, t {t}");
            }
        }
    }

    #[test]
    fn sign_ripples_in_the_expansion_are_caught() {
        // h(y) = 0.1 + 0.5y dips negative on the lower half of the support
        let err = check_positivity(&[0.1, 0.5], 3.0).unwrap_err();
        match err {
            Error::NegativeDensity { lambda, value } => {
                assert!(lambda > 1.0 && lambda < 3.0);
                assert!(value < 0.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_degenerate_discretizations() {
        assert!(siegel_saddle_solve(0.25, 3, 32).is_err());
        assert!(siegel_saddle_solve(0.25, 16, 8).is_err());
        assert!(siegel_saddle_solve(0.0, 16, 32).is_err());
        assert!(siegel_saddle_solve(0.25, 80, 90).is_err());
    }
}
