//! Damped integrals over products of three spherical Bessel functions.
//!
//! Evaluates `∫_0^∞ k^n w(k) j_l1(k r1) j_l2(k r2) j_l3(k r3) dk` for the
//! exponential weight `e^{-p^2 k}` and the Gaussian weight `e^{-(pk)^2}`.

pub mod basecase;
pub mod cli;
pub mod engine;
pub mod error;
pub mod expdamp;
pub mod gaussdamp;
pub mod gridscan;
pub mod hankelbowman;
pub mod kernels;
pub mod oracle;
pub mod paramdiff;
pub mod recursion;
pub mod specfun;
pub mod types;

pub use error::{Error, Result};
pub use types::*;
