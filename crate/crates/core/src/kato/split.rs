//! Orthogonal splittings induced by a unit covector `ξ₀`.
//!
//! Vectors in `V* ⊗ E` are laid out `(i, e)` and vectors in
//! `V* ⊗ Λ^k ⊗ E` are laid out `(i, I, e)`, covector slot slowest.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::conformal::{exterior_entries, interior_entries, SparseEntries};
use crate::error::{Error, Result};
use crate::tensor::index::{binomial, increasing_tuples, wedge_insert};
use crate::tensor::{CMatrix, CVector, Space, C64};

pub const UNIT_TOL: f64 = 1e-12;

pub(crate) fn check_unit(xi: &[f64]) -> Result<()> {
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

/// `u = u₁ + u₂` with `u₁ ∈ L ⊗ E`, `u₂ ∈ W ⊗ E`, `L = ⟨ξ₀⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineSplit {
    pub u1: CVector,
    pub u2: CVector,
    pub xi0: Vec<f64>,
}

impl LineSplit {
    /// The `E` factor of `u₁ = ξ₀ ⊗ u(ξ₀)`.
    pub fn directional(&self) -> CVector {
        contract(&self.u1, &self.xi0)
    }
}

/// `Σ_i ξ_i u_i` for `u` laid out `(i, e)`.
pub fn contract(u: &CVector, xi: &[f64]) -> CVector {
    let d = u.len() / xi.len();
    CVector::from_fn(d, |e, _| xi.iter().enumerate().map(|(i, &x)| u[i * d + e] * x).sum())
}

/// `ξ ⊗ w`.
pub fn outer(xi: &[f64], w: &CVector) -> CVector {
    let d = w.len();
    CVector::from_fn(xi.len() * d, |r, _| w[r % d] * xi[r / d])
}

pub fn decompose_line(u: &CVector, xi0: &[f64]) -> Result<LineSplit> {
    check_unit(xi0)?;
    if xi0.is_empty() || !u.len().is_multiple_of(xi0.len()) {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} is not in V* ⊗ E with n = {}",
            u.len(),
            xi0.len()
        )));
    }
    let u1 = outer(xi0, &contract(u, xi0));
    let u2 = u - &u1;
    Ok(LineSplit { u1, u2, xi0: xi0.to_vec() })
}

/// The four summands `V₁₁ ⊕ V₁₂ ⊕ V₂₁ ⊕ V₂₂` of `V* ⊗ Λ^k ⊗ E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Block {
    V11,
    V12,
    V21,
    V22,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::V11, Block::V12, Block::V21, Block::V22];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourBlockSplit {
    pub v11: CVector,
    pub v12: CVector,
    pub v21: CVector,
    pub v22: CVector,
    pub xi0: Vec<f64>,
}

impl FourBlockSplit {
    pub fn block(&self, b: Block) -> &CVector {
        match b {
            Block::V11 => &self.v11,
            Block::V12 => &self.v12,
            Block::V21 => &self.v21,
            Block::V22 => &self.v22,
        }
    }

    pub fn norms_sqr(&self) -> [f64; 4] {
        Block::ALL.map(|b| self.block(b).norm_squared())
    }
}

/// Exterior and interior multiplication on `V* ⊗ Λ^k ⊗ E`, `1 <= k <= n-1`.
#[derive(Debug, Clone)]
pub struct FormGeometry {
    pub n: usize,
    pub k: usize,
    pub fiber_dim: usize,
    ext: SparseEntries,
    int: SparseEntries,
}

impl FormGeometry {
    pub fn new(n: usize, k: usize, fiber_dim: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::BadDegree { n, k, reason: "four-block split needs 1 <= k <= n - 1" });
        }
        if fiber_dim == 0 {
            return Err(Error::ShapeMismatch("fiber must be nonzero".into()));
        }
        Ok(Self { n, k, fiber_dim, ext: exterior_entries(n, k)?, int: interior_entries(n, k)? })
    }

    pub fn forms_dim(&self) -> usize {
        binomial(self.n, self.k)
    }

    /// `dim(Λ^k ⊗ E)`.
    pub fn section_dim(&self) -> usize {
        self.forms_dim() * self.fiber_dim
    }

    /// `dim(V* ⊗ Λ^k ⊗ E)`.
    pub fn total_dim(&self) -> usize {
        self.n * self.section_dim()
    }

    pub fn section_space(&self) -> Result<Space> {
        Ok(Space::tensor(&[Space::exterior(self.n, self.k)?, Space::fiber("E", self.fiber_dim)]))
    }

    /// `ε^E(v) ∈ Λ^{k+1} ⊗ E`.
    pub fn exterior(&self, v: &CVector) -> CVector {
        CVector::from_vec(self.ext.apply_twisted(v.as_slice(), self.fiber_dim))
    }

    /// `ι^E(v) ∈ Λ^{k-1} ⊗ E`.
    pub fn interior(&self, v: &CVector) -> CVector {
        CVector::from_vec(self.int.apply_twisted(v.as_slice(), self.fiber_dim))
    }

    pub fn exterior_adjoint(&self, w: &CVector) -> CVector {
        CVector::from_vec(self.ext.apply_twisted_adjoint(w.as_slice(), self.fiber_dim))
    }

    pub fn interior_adjoint(&self, w: &CVector) -> CVector {
        CVector::from_vec(self.int.apply_twisted_adjoint(w.as_slice(), self.fiber_dim))
    }

    /// Projection onto `Ker ε^E`, using `εε* = (k+1) id`.
    pub fn project_closed(&self, v: &CVector) -> CVector {
        v - self.exterior_adjoint(&self.exterior(v)) / C64::new((self.k + 1) as f64, 0.0)
    }

    /// Projection onto `Ker ι^E`, using `ιι* = (n-k+1) id`.
    pub fn project_coclosed(&self, v: &CVector) -> CVector {
        v - self.interior_adjoint(&self.interior(v)) / C64::new((self.n - self.k + 1) as f64, 0.0)
    }

    /// Projection onto `Ker ε^E ∩ Ker ι^E`; the two ranges of the adjoints are orthogonal.
    pub fn project_harmonic(&self, v: &CVector) -> CVector {
        let e = self.exterior_adjoint(&self.exterior(v)) / C64::new((self.k + 1) as f64, 0.0);
        let i = self.interior_adjoint(&self.interior(v)) / C64::new((self.n - self.k + 1) as f64, 0.0);
        v - e - i
    }

    /// `Q = ε_ξ ι_ξ` on `Λ^k`, the projection onto `L ∧ Λ^{k-1} W`.
    pub fn wedge_projector(&self, xi: &[f64]) -> DMatrix<f64> {
        let rows = increasing_tuples(self.n, self.k);
        let index = Space::exterior(self.n, self.k).expect("k checked").index();
        let lower = increasing_tuples(self.n, self.k - 1);
        // e_ξ: Λ^{k-1} → Λ^k
        let mut e = DMatrix::<f64>::zeros(rows.len(), lower.len());
        for (col, set) in lower.iter().enumerate() {
            for (j, &x) in xi.iter().enumerate() {
                if let Some((t, sign)) = wedge_insert(j, set) {
                    let r = index.position(&t).expect("wedge lands in Λ^k");
                    e[(r, col)] += sign * x;
                }
            }
        }
        &e * e.transpose()
    }

    pub fn four_block_decompose(&self, v: &CVector, xi0: &[f64]) -> Result<FourBlockSplit> {
        check_unit(xi0)?;
        if xi0.len() != self.n || v.len() != self.total_dim() {
            return Err(Error::ShapeMismatch(format!(
                "expected covector of length {} and vector of length {}",
                self.n,
                self.total_dim()
            )));
        }
        let q = self.wedge_projector(xi0);
        let (c, d) = (self.forms_dim(), self.fiber_dim);
        let line = outer(xi0, &contract(v, xi0));
        let rest = v - &line;
        let apply_q = |x: &CVector| {
            let mut out = CVector::zeros(x.len());
            for i in 0..self.n {
                for p in 0..c {
                    for r in 0..c {
                        let s = q[(p, r)];
                        if s != 0.0 {
                            for e in 0..d {
                                out[(i * c + p) * d + e] += x[(i * c + r) * d + e] * s;
                            }
                        }
                    }
                }
            }
            out
        };
        let v11 = apply_q(&line);
        let v12 = &line - &v11;
        let v21 = apply_q(&rest);
        let v22 = &rest - &v21;
        Ok(FourBlockSplit { v11, v12, v21, v22, xi0: xi0.to_vec() })
    }

    /// Orthogonal projector onto one summand, as a dense matrix.
    pub fn block_projector(&self, block: Block, xi0: &[f64]) -> Result<CMatrix> {
        let dim = self.total_dim();
        let mut m = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut unit = CVector::zeros(dim);
            unit[col] = C64::new(1.0, 0.0);
            let split = self.four_block_decompose(&unit, xi0)?;
            m.set_column(col, split.block(block));
        }
        Ok(m)
    }
}
