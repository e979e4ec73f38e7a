//! First-order operators through their principal symbols.

mod catalog;
mod ellipticity;
mod spec;

pub use catalog::{catalog, twist, HodgeWeights, OperatorName, OperatorRef};
pub use ellipticity::{
    ellipticity_constant, ellipticity_constant_with, invariance_check, invariance_check_with, sampled_minimum,
    sphere_design, tangent_basis, EllipticityResult, Sampling, INVARIANCE_TOL,
};
pub use spec::OperatorSpec;
