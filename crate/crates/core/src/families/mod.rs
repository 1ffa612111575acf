//! Closed-form oracles for the two worked potential families.
//!
//! Each family exposes its potential, its two eigenstates, and a
//! [`crate::susy::GeneratingFunction`] view so the generic pipeline can be
//! cross-validated against the closed forms.

mod hyperbolic;
mod oscillator;

pub use hyperbolic::{HyperbolicFamily, HyperbolicRegime};
pub use oscillator::OscillatorFamily;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    Invalid(String),
    #[error("no closed-form eigenstate for m = {m}; only m >= 1 members carry them")]
    NoClosedFormEigenstate { m: usize },
}
