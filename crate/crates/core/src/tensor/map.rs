use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::space::Space;
use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };
pub const I: C64 = Complex { re: 0.0, im: 1.0 };

/// A dense complex linear map between basis-indexed spaces.
///
/// `entries` has shape `codomain.dim() x domain.dim()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    domain: Space,
    codomain: Space,
    entries: CMatrix,
}

impl LinearMap {
    pub fn new(domain: Space, codomain: Space, entries: CMatrix) -> Result<Self> {
        if entries.nrows() != codomain.dim() || entries.ncols() != domain.dim() {
            return Err(Error::ShapeMismatch(format!(
                "entries are {}x{}, descriptors need {}x{}",
                entries.nrows(),
                entries.ncols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(Self { domain, codomain, entries })
    }

    pub fn from_real(domain: Space, codomain: Space, entries: &DMatrix<f64>) -> Result<Self> {
        Self::new(domain, codomain, entries.map(|x| Complex::new(x, 0.0)))
    }

    pub fn identity(space: Space) -> Self {
        let d = space.dim();
        Self { domain: space.clone(), codomain: space, entries: CMatrix::identity(d, d) }
    }

    pub fn zero(domain: Space, codomain: Space) -> Self {
        let entries = CMatrix::zeros(codomain.dim(), domain.dim());
        Self { domain, codomain, entries }
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// Conjugate transpose; all bases are orthonormal.
    pub fn adjoint(&self) -> Self {
        Self { domain: self.codomain.clone(), codomain: self.domain.clone(), entries: self.entries.adjoint() }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<Self> {
        if inner.codomain != self.domain {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: inner codomain {:?} differs from outer domain {:?}",
                inner.codomain.kind(),
                self.domain.kind()
            )));
        }
        Ok(Self {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries * &inner.entries,
        })
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        assert_eq!(v.len(), self.domain.dim(), "vector length does not match domain");
        &self.entries * v
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { entries: &self.entries * Complex::new(s, 0.0), ..self.clone() }
    }

    pub fn add(&self, other: &LinearMap) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::ShapeMismatch("cannot add maps between different spaces".into()));
        }
        Ok(Self { entries: &self.entries + &other.entries, ..self.clone() })
    }

    /// `self ⊗ other`, acting on `domain ⊗ other.domain`.
    pub fn kron(&self, other: &LinearMap) -> Self {
        Self {
            domain: Space::tensor(&[self.domain.clone(), other.domain.clone()]),
            codomain: Space::tensor(&[self.codomain.clone(), other.codomain.clone()]),
            entries: self.entries.kronecker(&other.entries),
        }
    }

    /// Stack maps with a common domain into a map to the direct sum of codomains.
    pub fn stack(maps: &[LinearMap]) -> Result<Self> {
        let first = maps.first().ok_or_else(|| Error::ShapeMismatch("empty stack".into()))?;
        if maps.iter().any(|m| m.domain != first.domain) {
            return Err(Error::ShapeMismatch("stacked maps need a common domain".into()));
        }
        let codomain = Space::direct_sum(&maps.iter().map(|m| m.codomain.clone()).collect::<Vec<_>>());
        let mut entries = CMatrix::zeros(codomain.dim(), first.domain.dim());
        let mut row = 0;
        for m in maps {
            entries.rows_mut(row, m.entries.nrows()).copy_from(&m.entries);
            row += m.entries.nrows();
        }
        Ok(Self { domain: first.domain.clone(), codomain, entries })
    }

    /// Same matrix viewed between other descriptors of equal dimension.
    pub fn relabel(&self, domain: Space, codomain: Space) -> Result<Self> {
        Self::new(domain, codomain, self.entries.clone())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// `P P*` on the codomain.
    pub fn gram(&self) -> CMatrix {
        &self.entries * self.entries.adjoint()
    }
}

/// Frobenius norm of `m - m*`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// Numerical rank using singular values above `rel_tol * largest`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Deterministic orthonormal basis for the column span of `gens`.
///
/// Modified Gram-Schmidt with one reorthogonalization pass; columns whose
/// residual norm falls below `tol` times their original norm are dropped.
pub fn orthonormal_span(gens: &CMatrix, tol: f64) -> CMatrix {
    let rows = gens.nrows();
    let mut basis: Vec<CVector> = Vec::new();
    for j in 0..gens.ncols() {
        let original = gens.column(j).into_owned();
        let scale = original.norm();
        if scale == 0.0 {
            continue;
        }
        let mut v = original;
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&v);
                v.axpy(-coeff, b, ONE);
            }
        }
        let nv = v.norm();
        if nv > tol * scale {
            basis.push(v.unscale(nv));
        }
    }
    let mut out = CMatrix::zeros(rows, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Orthonormal basis of the orthogonal complement of an orthonormal column set.
pub fn orthonormal_complement(basis: &CMatrix, tol: f64) -> CMatrix {
    let d = basis.nrows();
    let projector = CMatrix::identity(d, d) - basis * basis.adjoint();
    orthonormal_span(&projector, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_normal_matrix, complex_normal_vector, master_rng};

    #[test]
    fn identity_adjoint() {
        let id = LinearMap::identity(Space::fiber("E", 3));
        assert_eq!(id.adjoint(), id);
    }

    #[test]
    fn scalar_conjugation() {
        let s = Space::fiber("E", 1);
        let m = LinearMap::new(s.clone(), s, CMatrix::from_element(1, 1, I)).unwrap();
        assert_eq!(m.adjoint().entries()[(0, 0)], -I);
    }

    #[test]
    fn adjoint_inner_product_identity() {
        let mut rng = master_rng(7);
        let m =
            LinearMap::new(Space::fiber("U", 3), Space::fiber("W", 4), complex_normal_matrix(&mut rng, 4, 3)).unwrap();
        let adj = m.adjoint();
        assert_eq!(adj.adjoint(), m);
        for _ in 0..100 {
            let u = complex_normal_vector(&mut rng, 3);
            let w = complex_normal_vector(&mut rng, 4);
            let lhs = m.apply(&u).dotc(&w);
            let rhs = u.dotc(&adj.apply(&w));
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn shape_checks() {
        assert!(LinearMap::new(Space::fiber("U", 2), Space::fiber("W", 2), CMatrix::zeros(3, 2)).is_err());
        let a = LinearMap::identity(Space::fiber("U", 2));
        let b = LinearMap::identity(Space::fiber("W", 2));
        assert!(a.compose(&b).is_err());
        assert!(a.compose(&a).is_ok());
    }

    #[test]
    fn span_and_complement() {
        let mut rng = master_rng(3);
        let g = complex_normal_matrix(&mut rng, 5, 2);
        let mut gens = CMatrix::zeros(5, 3);
        gens.columns_mut(0, 2).copy_from(&g);
        let combo = g.column(0) * Complex::new(2.0, -1.0) + g.column(1);
        gens.set_column(2, &combo);
        let b = orthonormal_span(&gens, 1e-10);
        assert_eq!(b.ncols(), 2);
        let gram = b.adjoint() * &b;
        assert!((gram - CMatrix::identity(2, 2)).norm() < 1e-13);
        let c = orthonormal_complement(&b, 1e-10);
        assert_eq!(c.ncols(), 3);
        assert!((b.adjoint() * &c).norm() < 1e-13);
        assert_eq!(numerical_rank(&gens, 1e-10), 2);
    }
}
