use serde::Serialize;

use super::report::{conformity_factor, measure_conformity, ProjectionReport, DEFAULT_CONFORMITY_TOL};
use crate::error::Result;
use crate::tensor::{orthonormal_complement, orthonormal_span, CMatrix, LinearMap, Space};

/// Tolerance used when orthonormalizing spanning sets.
pub const SPAN_TOL: f64 = 1e-10;

/// A subspace given by orthonormal columns in the coordinates of an ambient space.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Span of the columns of `generators`, orthonormalized deterministically.
    pub fn span(generators: &CMatrix) -> Self {
        Self { basis: orthonormal_span(generators, SPAN_TOL) }
    }

    pub fn from_orthonormal(basis: CMatrix) -> Self {
        Self { basis }
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn complement(&self) -> Self {
        Self { basis: orthonormal_complement(&self.basis, SPAN_TOL) }
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }
}

/// Components of a conformal projection relative to `F = F1 ⊕ F1^⊥`.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentSplit {
    #[serde(skip)]
    pub first: LinearMap,
    #[serde(skip)]
    pub second: LinearMap,
    pub first_report: Option<ProjectionReport>,
    pub second_report: Option<ProjectionReport>,
}

/// Split `p` along `f1` and its orthogonal complement in the codomain.
///
/// Each component `B_i* P` maps onto a codomain carrying the orthonormal
/// basis `B_i`; empty components have no report.
pub fn split_components(p: &LinearMap, f1: &Subspace) -> Result<ComponentSplit> {
    conformity_factor(p, DEFAULT_CONFORMITY_TOL)?;
    let f2 = f1.complement();
    let component = |sub: &Subspace, label: &str| -> Result<(LinearMap, Option<ProjectionReport>)> {
        let map =
            LinearMap::new(p.domain().clone(), Space::fiber(label, sub.dim()), sub.basis().adjoint() * p.entries())?;
        let report = (sub.dim() > 0).then(|| measure_conformity(&map, DEFAULT_CONFORMITY_TOL));
        Ok((map, report))
    };
    let (first, first_report) = component(f1, "F1")?;
    let (second, second_report) = component(&f2, "F2")?;
    Ok(ComponentSplit { first, second, first_report, second_report })
}
