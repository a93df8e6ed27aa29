//! Numerics for PPT states built from private states.
//!
//! The crate is `no_std` (it needs `alloc`) and does no IO. It covers:
//!
//! * dense complex operator algebra: tensor products, partial transposes and
//!   traces, realignment, Jacobi spectral routines, Schatten norms, fidelity;
//! * constructors for private states, the Fourier-pattern PPT mixture
//!   ("flower" state) and its tensor powers;
//! * closed-form distance and dimension bounds;
//! * key-block decomposition and privacy squeezing of 2x2xd_sxd_s states;
//! * convex-geometry solvers: support functions of the PPT and separable
//!   sets, Schatten-2 projection onto PPT states, width experiments.
//!
//! IO, file formats and the command-line driver live in the `pptgeo` crate.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod norms;
pub mod private;
pub mod random;
pub mod rng;
pub mod spectral;
pub mod squeeze;
pub mod state;
pub mod subsystem;

pub use error::{Error, Result};
pub use matrix::{Capacity, ComplexMatrix, HermitianOperator, C64, DEFAULT_MAX_DIM};
pub use state::FactoredState;
