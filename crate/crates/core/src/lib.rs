//! Energy leakage from a memory qubit through a detuned, dephasing control
//! qubit, and two ways of suppressing it.
//!
//! - [`linalg`]: dense complex matrices, kets, Jacobi eigensolver.
//! - [`model`]: Jaynes-Cummings Hamiltonians and control-qubit dissipators.
//! - [`dynamics`]: measurement-interrupted recursion and RK4 master equation.
//! - [`analysis`]: effective relaxation time, analytic estimate, fits.
//! - [`decoupling`]: field-gradient W-state dephasing and the dark-state subspace.
//! - [`experiments`]: JSON-configured sweeps that write CSV tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod decoupling;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
