//! Steady-state solver for the two-dimensional compressible Euler equations using
//! a fifth-order alternative-WENO finite-difference discretization driven to
//! convergence by fixed-point fast sweeping.

pub mod aweno;
pub mod cli;
pub mod error;
pub mod euler;
pub mod interpolation;
pub mod iterate;
pub mod problems;
pub mod riemann;
pub mod spatial;

pub use error::{Error, Result};
