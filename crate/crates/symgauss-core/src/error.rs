use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Unified error type for all computation routes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside a potential's domain or otherwise rejected input.
    Domain(&'static str),
    /// Ensemble parameters fail validation (N = 0, σ ≤ 0, bad β, ...).
    InvalidSpec(String),
    /// Requested operation does not apply to the given ensemble.
    Incompatible(String),
    /// Principal-value pole not strictly inside the integration interval.
    PoleOutsideRange,
    /// Saddle-equation probe closer to a support edge than allowed.
    ProbeTooCloseToEdge { index: usize },
    /// A quadrature did not reach its target; `worst` names the moment-matrix
    /// entry that failed when applicable.
    QuadratureFailure {
        worst: Option<(usize, usize)>,
        achieved: f64,
        target: f64,
    },
    /// A skew pivot lost nearly all significant bits at the working mantissa
    /// size; retry with at least `required_bits`.
    PrecisionEscalation { required_bits: usize },
    /// Skew pairing degenerate (pivot vanished or came out with the wrong
    /// sign) beyond what precision escalation can repair.
    DegeneratePairing { pair: usize, value: f64 },
    /// Newton iteration failed to converge; residual norms per iteration.
    NewtonFailure { residual_history: Vec<f64> },
    /// A solved density came out negative; the solution is rejected.
    NegativeDensity { lambda: f64, value: f64 },
    /// Metropolis step-size tuning ended outside the accepted window.
    TuningFailure { acceptance: f64 },
    /// Operation rejected because its cost grows too fast (with explanation).
    TooLarge(String),
    /// Malformed serialized data.
    Serialization(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain violation: {what}"),
            Error::InvalidSpec(s) => write!(f, "invalid ensemble: {s}"),
            Error::Incompatible(s) => write!(f, "incompatible request: {s}"),
            Error::PoleOutsideRange => write!(f, "principal-value pole outside the open interval"),
            Error::ProbeTooCloseToEdge { index } => {
                write!(f, "probe {index} within 1% of a support edge")
            }
            Error::QuadratureFailure {
                worst,
                achieved,
                target,
            } => {
                write!(f, "quadrature stalled at {achieved:.3e} (target {target:.3e})")?;
                if let Some((i, j)) = worst {
                    write!(f, " on entry ({i},{j})")?;
                }
                Ok(())
            }
            Error::PrecisionEscalation { required_bits } => write!(
                f,
                "pivot degenerate at working precision; retry with {required_bits}-bit mantissa"
            ),
            Error::DegeneratePairing { pair, value } => {
                write!(f, "skew pairing degenerate at pair {pair} (pivot {value:e})")
            }
            Error::NewtonFailure { residual_history } => write!(
                f,
                "Newton iteration failed after {} steps (last residual {:.3e})",
                residual_history.len(),
                residual_history.last().copied().unwrap_or(f64::NAN)
            ),
            Error::NegativeDensity { lambda, value } => {
                write!(f, "solved density negative at λ = {lambda}: {value:.3e}")
            }
            Error::TuningFailure { acceptance } => write!(
                f,
                "Metropolis acceptance rate {acceptance:.3} outside [0.1, 0.7] after tuning"
            ),
            Error::TooLarge(s) => write!(f, "rejected as too large: {s}"),
            Error::Serialization(s) => write!(f, "serialization error: {s}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
