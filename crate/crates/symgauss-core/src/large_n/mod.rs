//! Planar (N → ∞) limits: master fields, their saddle equations, the
//! universal free energy, and the numerically solved Siegel field.

pub mod free_energy;
pub mod master_field;
pub mod saddle;
pub mod siegel;
pub mod trilog;

pub use free_energy::{f_uni, f_uni_closed, genus_deltas, z2_asymptotic};
pub use master_field::{master_field_q, master_field_sw, sw_support, FieldSource, MasterField};
pub use saddle::saddle_residual;
pub use siegel::{siegel_saddle_solve, SiegelSolveReport};
pub use trilog::{trilog, zeta3};
