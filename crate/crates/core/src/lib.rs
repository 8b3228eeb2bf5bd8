//! Harmonic analysis over `F_q^d` for odd primes `q`: exponential sums,
//! sphere Fourier transforms, varieties, and radial restriction norms.

#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod expsums;
pub mod field;
pub mod fourier;
pub mod points;
pub mod poly;
pub mod restriction;
pub mod scan;
pub mod spheres;
pub mod varieties;

pub use error::{Error, Result};
pub use field::FieldCtx;
