//! Stochastic oracles.
//!
//! Two independent sampling routes check the deterministic ones:
//!
//! * [`mc_log_partition`] estimates the reduced partition integrals by
//!   importance sampling, giving an unbiased value with a standard error for
//!   any β — including β = 1, 4 where no closed form exists.
//! * [`coulomb_metropolis`] samples the eigenvalue Coulomb gas of the
//!   effective potential, whose large-N particle histogram must reproduce
//!   the analytic master fields.
//!
//! Everything is driven by a seeded ChaCha12 stream ([`rng::Stream`]), so
//! every estimate and every chain is reproducible bit-for-bit from its
//! (seed, config) pair.

pub mod gas;
pub mod histogram;
pub mod importance;
pub mod rng;

pub use gas::{coulomb_metropolis, coulomb_metropolis_with, GasConfig, GasRun, GasState};
pub use histogram::{empirical_density, ks_distance, ks_two_sample, CdfTable, Histogram};
pub use importance::{mc_log_partition, McEstimate};
pub use rng::Stream;
