//! Exact and semi-exact partition functions at finite N.
//!
//! Three routes live here, cross-checking each other:
//!
//! * the β = 2 closed form, valid at every N;
//! * the skew-orthogonal route for β = 1 and the Siegel space at even
//!   N ≤ 24: moment matrices in extended precision, symplectic
//!   Gram–Schmidt, and Pfaffian assembly from the elimination pivots;
//! * brute-force tensor quadrature at N ≤ 4, the oracle everything else is
//!   held against.
//!
//! Degree bookkeeping: polynomials are indexed by degree 0..N−1 and the
//! assembled product of leading coefficients runs over all N of them. The
//! skew pairing follows the sign convention that puts mass at higher second
//! argument first, making ⟨1, x⟩ positive and every elimination pivot
//! strictly positive.

mod closed_form;
mod gram_schmidt;
mod moments;
mod partition;

pub use closed_form::{z2_closed_form, z2_reduced_log};
pub use gram_schmidt::{symplectic_gram_schmidt, SkewBasis};
pub use moments::{
    skew_moment_matrix, skew_moment_matrix_with_prec, SkewMomentMatrix, DEFAULT_PREC, MAX_SKEW_N,
};
pub use partition::{direct_quadrature_logz, z1_finite, zs_finite};
