//! Verification laboratory for extended Kato inequalities of conformal
//! first-order operators.
//!
//! The crate builds conformal projections and operator symbols as explicit
//! complex matrices, measures conformity factors and ellipticity constants,
//! and checks the pointwise Kato-type inequalities by exact algebra,
//! randomized sampling and trigonometric fields on flat tori.

pub mod conformal;
pub mod error;
pub mod exec;
pub mod field;
pub mod kato;
pub mod rng;
pub mod symbols;
pub mod tensor;

pub use error::{Error, Result};
pub use exec::Execution;
