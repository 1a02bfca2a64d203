//! Partition functions of Gaussian distributions on noncompact symmetric
//! spaces, reduced to eigenvalue (radial) coordinates.
//!
//! The spaces covered are the positive-definite matrix cones over the reals,
//! complexes, and quaternions (Dyson index β = 1, 2, 4) and the Siegel upper
//! half space. In radial coordinates the partition function becomes an
//! N-dimensional integral of a product weight against a Vandermonde repulsion
//! factor, and this crate computes it along several mutually checking routes:
//!
//! * exact closed form at β = 2 ([`finite_n::z2_closed_form`]),
//! * skew-orthogonal polynomial pivots at β = 1 and for the Siegel space
//!   ([`finite_n::z1_finite`], [`finite_n::zs_finite`]), carried out in
//!   software extended precision because the moment matrices are
//!   catastrophically ill-conditioned,
//! * brute-force tensor quadrature at small N ([`finite_n::direct_quadrature_logz`]),
//! * importance-sampled Monte Carlo ([`montecarlo::mc_log_partition`]),
//! * large-N equilibrium measures and the genus-zero free energy
//!   ([`large_n`]), including a collocation solver for the Siegel
//!   saddle-point equation for which no closed form is known.
//!
//! All partition values are handled on the natural-log scale throughout; raw
//! values overflow double range already at modest N.
//!
//! The crate is `no_std` (requires `alloc`). File formats, caching, and the
//! command-line surface live in the companion crate `symgauss-cli`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ensemble;
pub mod error;
pub(crate) mod fm;
pub mod potential;
pub mod quad;
pub mod pv;
pub mod vandermonde;
pub mod xprec;

pub mod finite_n;
pub mod large_n;
pub mod montecarlo;

pub use ensemble::{
    ln_factorial, log_prefactor, EnsembleSpec, Method, PartitionResult, PrefactorConvention, Space,
};

/// Crate version, re-exported so downstream tools can stamp provenance
/// records without parsing their own lockfiles.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use error::{Error, Result};
pub use potential::{Potential, PotentialKind};
pub use pv::pv_integral;
pub use vandermonde::log_vandermonde;
