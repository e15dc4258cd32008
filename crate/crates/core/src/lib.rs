//! Group-theoretic quantization of a charged particle on a sphere around a
//! magnetic monopole: truncated E(3) representations, Landau levels, the
//! line-bundle realization, gauge covariance, the classical phase space and
//! the central-extension computation.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod halfint;
pub mod bundlegrid;
pub mod classical;
pub mod liecohom;
pub mod linalg;
pub mod repkit;
pub mod spectrumkit;

pub use error::{Error, Result};
pub use halfint::HalfInt;
