//! Deterministic multimode Fock-space engine for pulsed optomechanical
//! quantum teleportation.
//!
//! The crate is `no_std` and only needs `alloc`. States are sparse maps from
//! occupation tuples to complex amplitudes ([`fock::PureState`]); mixed states
//! are weighted collections of pure branches ([`fock::Ensemble`]). On top of
//! that sit the optical/optomechanical primitives ([`elements`]), threshold
//! detection and Bell-pattern heralding ([`detection`]), the end-to-end
//! scenarios ([`protocol`]) and closed-form formulas plus an independent dense
//! density-matrix oracle ([`analysis`]).
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod detection;
pub mod elements;
pub mod error;
pub mod fock;
pub mod math;
pub mod protocol;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Engine version string echoed into run manifests.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
