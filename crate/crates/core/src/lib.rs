//! Physics-informed extreme learning machines (PIELM) for linear PDEs and a
//! cell-decomposed variant (DPIELM).
//!
//! A single random tanh layer is fixed; only the output weights are fitted
//! by solving the collocation system `H c = K` in the least-squares sense.

pub mod error;
pub mod features;
pub mod geometry;
pub mod linalg;
pub mod operator;
pub mod pielm;
pub mod dpielm;
pub mod cases;

pub use error::{Error, Result};
