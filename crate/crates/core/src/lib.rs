//! Abrasion prediction for SSBR rubber composites.
//!
//! Eight mechanical properties (hardness, moduli, tensile and tear strength,
//! elongation, permanent set) are mapped to Akron abrasion by one of:
//!
//! - [`mlfn`]: a one-hidden-layer tanh network trained by backpropagation,
//! - [`grnn`]: a Gaussian-kernel general regression neural network,
//! - [`evalbench::ols`]: a linear least-squares baseline.
//!
//! [`evalbench`] runs seeded train/test trials and the hidden-node sweep;
//! [`persist`] reads and writes versioned JSON model files.

pub mod dataset;
pub mod error;
pub mod evalbench;
pub mod grnn;
pub mod mlfn;
mod numeric;
pub mod persist;
pub mod rng;

pub use error::{Error, Result};
