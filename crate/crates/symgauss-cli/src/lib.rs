//! Command-line companion to [`symgauss_core`].
//!
//! The core crate is `no_std` and knows nothing about files. Everything with
//! an operating-system flavor lives here: argument parsing, a flat TOML
//! configuration layer, provenance manifests, a content-addressed artifact
//! cache with advisory file locking, CSV/JSON writers, and the
//! cross-validation suites behind `symgauss verify`.

pub mod cache;
pub mod commands;
pub mod config;
pub mod criteria;
pub mod manifest;
pub mod output;

use std::fmt;

/// Exit status contract of the `symgauss` binary.
pub const EXIT_OK: i32 = 0;
/// A computation or verification ran and failed.
pub const EXIT_FAILURE: i32 = 1;
/// The request itself was malformed (unknown value, incompatible flags).
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Maps to exit code 2.
    Usage(String),
    /// Maps to exit code 1.
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<symgauss_core::Error> for CliError {
    fn from(e: symgauss_core::Error) -> Self {
        use symgauss_core::Error as E;
        match &e {
            // Rejected inputs are the caller's problem; everything else is a
            // computation that ran and came back without a usable value.
            E::InvalidSpec(_) | E::Incompatible(_) | E::Domain(_) | E::TooLarge(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("io: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
