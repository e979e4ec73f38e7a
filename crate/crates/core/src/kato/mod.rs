//! Pointwise Kato machinery: the constants, the splittings along a covector,
//! the key lemma, both theorems and their randomized checks.

mod checks;
mod ctilde;
mod fuzz;
mod split;
mod verdict;

pub use checks::{
    check_key_lemma, check_theorem_foldo, check_theorem_hodge, equality_witness, kato_ratio, verify_spectral_bounds,
    BranchRule, FoldoOperator, HodgeCheck, KeyLemma, SpectralBounds, BRANCH_TOL, DEGENERATE_TOL, SPECTRAL_TOL,
};
pub use ctilde::{ctilde_lemma, ctilde_operator, hodge_ctilde_pair, Extended, ExtendedReal, HodgePair};
pub use fuzz::{
    key_lemma_geometry, run_fuzz, CheckSummary, FuzzConfig, FuzzReport, FuzzTarget, KeyGeometry, RefinedSummary,
};
pub use split::{contract, decompose_line, outer, Block, FormGeometry, FourBlockSplit, LineSplit, UNIT_TOL};
pub use verdict::{Branch, KatoVerdict, Theorem};
