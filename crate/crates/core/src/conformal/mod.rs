//! Conformal projections `P` with `P P* = ρ² id`, their factors and component splits.

mod catalog;
mod report;
mod split;
mod table;

pub use catalog::{
    clifford_kernel_basis, clifford_projection, contraction_projection, exterior_entries, exterior_projection,
    hodge_star, interior_entries, interior_projection, symmetrization_projection, twistor_projection, SparseEntries,
};
pub use report::{conformity_factor, measure_conformity, ProjectionReport, DEFAULT_CONFORMITY_TOL, RANK_TOL};
pub use split::{split_components, ComponentSplit, Subspace, SPAN_TOL};
pub use table::{
    conformity_table, twistor_symbol_check, ConformityRow, Constructor, TwistorSymbolCheck, TWISTOR_SAMPLES,
};
