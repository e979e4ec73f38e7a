use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{numerical_rank, CMatrix, LinearMap};

/// Relative residual accepted when certifying `P P* = ρ² id`.
pub const DEFAULT_CONFORMITY_TOL: f64 = 1e-10;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub rho_squared: f64,
    pub surjective: bool,
    /// `‖P P* - ρ² id‖_F / ρ²`.
    pub residual: f64,
    pub tolerance: f64,
}

impl ProjectionReport {
    pub fn certified(&self) -> bool {
        self.surjective && self.residual <= self.tolerance
    }
}

/// Measure `ρ² = tr(P P*) / dim W` and the conformity residual without judging it.
pub fn measure_conformity(p: &LinearMap, tol: f64) -> ProjectionReport {
    let codim = p.codomain().dim();
    let gram = p.gram();
    let rho_squared = if codim == 0 { 0.0 } else { gram.trace().re / codim as f64 };
    let residual = if rho_squared > 0.0 {
        (gram - CMatrix::identity(codim, codim) * Complex::new(rho_squared, 0.0)).norm() / rho_squared
    } else {
        f64::INFINITY
    };
    // Spec(P P*) lies within ρ²·residual of ρ², so residual < 1 already forces full rank.
    let surjective = codim > 0 && (residual < 1.0 || numerical_rank(p.entries(), RANK_TOL) == codim);
    ProjectionReport { rho_squared, surjective, residual, tolerance: tol }
}

/// Certify `p` as a conformal projection at relative tolerance `tol`.
pub fn conformity_factor(p: &LinearMap, tol: f64) -> Result<ProjectionReport> {
    let report = measure_conformity(p, tol);
    if !report.surjective {
        return Err(Error::NotSurjective {
            rank: numerical_rank(p.entries(), RANK_TOL),
            codim: p.codomain().dim(),
            residual: report.residual,
        });
    }
    if report.residual > tol {
        return Err(Error::NotConformal { residual: report.residual, tolerance: tol });
    }
    Ok(report)
}
