//! Stable 3-forms, SU(3)-structure torsion and the source-free Type IIA flow
//! on six-dimensional Lie algebras.

pub mod catalog;
pub mod check;
pub mod error;
pub mod flow;
pub mod hitchin;
pub mod liealg;
pub mod multilinear;
pub mod su3;

pub use error::{Error, Result};

/// Default comparison tolerance.
pub const DEFAULT_EPS: f64 = 1e-9;
