//! Pseudo-spectral Cahn–Hilliard/Navier–Stokes solver on the periodic torus
//! with mollification, commutator and energy-balance diagnostics.

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod energy;
pub mod error;
pub mod io;
pub mod lab;
pub mod potential;
pub mod solver;
pub mod spectral;

pub use error::{Error, ParseError, Result, SnapshotError};
pub use spectral::{Grid, ScalarField, SpectralField, VectorField};
