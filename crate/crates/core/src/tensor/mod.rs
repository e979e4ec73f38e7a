//! Basis-indexed spaces, dense complex maps and hermitian spectra.

pub mod clifford;
pub mod index;
mod map;
mod space;
mod spectrum;

pub use clifford::{clifford_generators, clifford_relation_residual, spinor_dim, spinor_space};
pub use map::{
    hermitian_defect, numerical_rank, orthonormal_complement, orthonormal_span, CMatrix, CVector, LinearMap, C64, I,
    ONE, ZERO,
};
pub use space::{build_space, PowerKind, Space, SpaceKind};
pub use spectrum::{hermitian_eigen, hermitian_spectrum, Spectrum, HERMITIAN_TOL};
