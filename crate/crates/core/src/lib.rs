//! Simulation and verification of quantum state transfer through
//! tight-binding lattices.
//!
//! The crate covers two regimes:
//!
//! - engineered lattices whose nearest-neighbor hoppings make the spectrum
//!   commensurate with the diagonal reflection, so any single- or
//!   many-fermion state is mirrored exactly at `t = π/2`;
//! - a uniform ring near half filling, where states built from modes close to
//!   the Fermi surface translate by `a` sites at `t = a / 2J` to a good
//!   approximation.
//!
//! Units are `ħ = 1`; energies are in units of the hopping scale and times in
//! inverse energy.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod couplings;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod hamiltonian;
pub mod io;
pub mod linalg;
pub mod parallel;
pub mod symmetry;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version echoed in run results.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
