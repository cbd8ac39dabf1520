//! Error type shared across the crate.
//!
//! Most routines are total on their documented domains; the variants here
//! cover the genuinely exceptional cases: arguments outside a domain, poles
//! of meromorphic quantities hit exactly, accuracy targets that could not be
//! met, and degenerate configurations (empty character groups, zero vectors).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// A meromorphic quantity was evaluated at (or numerically too close to)
    /// one of its poles. `factor` names the offending factor so the caller
    /// can tell a genuine pole of the object from a removable artifact of
    /// the formula used.
    #[error("pole at {location}: factor {factor} vanishes")]
    Pole { location: String, factor: String },

    /// A numerical routine could not reach its requested accuracy.
    #[error("accuracy not attained: {0}")]
    Accuracy(String),

    /// Structurally degenerate input (empty set, identically-zero function).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
