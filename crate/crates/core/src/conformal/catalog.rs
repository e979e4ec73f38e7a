//! Explicit conformal projections: exterior and interior multiplication,
//! symmetrization and contraction on symmetric tensors, Clifford
//! multiplication and the twistor projection onto its kernel.
//!
//! Symmetric powers sit inside the tensor power with the induced inner
//! product. The orthonormal basis vector for a non-decreasing tuple `α` is the
//! normalized sum of its `N_α` distinct words, which gives the closed forms
//! `S(e_j ⊗ b_α) = (k+1) √(N_α / N_{α+j}) b_{α+j}` and
//! `C(e_j ⊗ b_α) = √(N_{α-j} / N_α) b_{α-j}`.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::tensor::index::{interior_remove, multinomial, multiset_insert, multiset_remove, wedge_insert};
use crate::tensor::{clifford_generators, orthonormal_span, spinor_space, CMatrix, LinearMap, Space, C64};

/// Real sparse matrix in triplet form.
#[derive(Debug, Clone)]
pub struct SparseEntries {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseEntries {
    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += Complex::new(v, 0.0);
        }
        m
    }

    /// Apply `self ⊗ id_E` to a vector laid out as `(col, e)` with `e` fastest.
    pub fn apply_twisted(&self, v: &[C64], fiber_dim: usize) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.cols * fiber_dim);
        let mut out = vec![Complex::new(0.0, 0.0); self.rows * fiber_dim];
        for &(r, c, s) in &self.entries {
            let src = &v[c * fiber_dim..(c + 1) * fiber_dim];
            let dst = &mut out[r * fiber_dim..(r + 1) * fiber_dim];
            for (d, x) in dst.iter_mut().zip(src) {
                *d += x * s;
            }
        }
        out
    }

    /// Apply `selfᵀ ⊗ id_E`, the adjoint of [`Self::apply_twisted`] for real entries.
    pub fn apply_twisted_adjoint(&self, w: &[C64], fiber_dim: usize) -> Vec<C64> {
        debug_assert_eq!(w.len(), self.rows * fiber_dim);
        let mut out = vec![Complex::new(0.0, 0.0); self.cols * fiber_dim];
        for &(r, c, s) in &self.entries {
            let src = &w[r * fiber_dim..(r + 1) * fiber_dim];
            let dst = &mut out[c * fiber_dim..(c + 1) * fiber_dim];
            for (d, x) in dst.iter_mut().zip(src) {
                *d += x * s;
            }
        }
        out
    }
}

fn form_space_pair(n: usize, k: usize) -> Result<(Space, Space)> {
    let forms = Space::exterior(n, k)?;
    Ok((Space::tensor(&[Space::dual(n), forms.clone()]), forms))
}

/// Triplets of `ε(e_i ⊗ e_I) = e_i ∧ e_I`.
pub fn exterior_entries(n: usize, k: usize) -> Result<SparseEntries> {
    if n == 0 || k >= n {
        return Err(Error::BadDegree { n, k, reason: "exterior multiplication needs k <= n - 1" });
    }
    let src = Space::exterior(n, k)?;
    let dst = Space::exterior(n, k + 1)?.index();
    let mut entries = Vec::new();
    for i in 0..n {
        for (p, set) in src.labels().iter().enumerate() {
            if let Some((big, sign)) = wedge_insert(i, set) {
                entries.push((dst.position(&big).expect("label"), i * src.dim() + p, sign));
            }
        }
    }
    Ok(SparseEntries { rows: dst.len(), cols: n * src.dim(), entries })
}

/// Triplets of `ι(e_i ⊗ e_I) = ι_{e_i} e_I`.
pub fn interior_entries(n: usize, k: usize) -> Result<SparseEntries> {
    if k == 0 || k > n {
        return Err(Error::BadDegree { n, k, reason: "interior multiplication needs 1 <= k <= n" });
    }
    let src = Space::exterior(n, k)?;
    let dst = Space::exterior(n, k - 1)?.index();
    let mut entries = Vec::new();
    for i in 0..n {
        for (p, set) in src.labels().iter().enumerate() {
            if let Some((small, sign)) = interior_remove(i, set) {
                entries.push((dst.position(&small).expect("label"), i * src.dim() + p, sign));
            }
        }
    }
    Ok(SparseEntries { rows: dst.len(), cols: n * src.dim(), entries })
}

/// `ε : V* ⊗ Λ^k V* → Λ^{k+1} V*`, conformity factor `k + 1`.
pub fn exterior_projection(n: usize, k: usize) -> Result<LinearMap> {
    let sparse = exterior_entries(n, k)?;
    let (domain, _) = form_space_pair(n, k)?;
    LinearMap::new(domain, Space::exterior(n, k + 1)?, sparse.to_dense())
}

/// `ι : V* ⊗ Λ^k V* → Λ^{k-1} V*`, conformity factor `n - k + 1`.
pub fn interior_projection(n: usize, k: usize) -> Result<LinearMap> {
    let sparse = interior_entries(n, k)?;
    let (domain, _) = form_space_pair(n, k)?;
    LinearMap::new(domain, Space::exterior(n, k - 1)?, sparse.to_dense())
}

/// `S : V* ⊗ S^k V* → S^{k+1} V*`, conformity factor `(k + 1)²`.
pub fn symmetrization_projection(n: usize, k: usize) -> Result<LinearMap> {
    if n == 0 {
        return Err(Error::BadDegree { n, k, reason: "symmetrization needs n >= 1" });
    }
    let src = Space::symmetric(n, k);
    let dst = Space::symmetric(n, k + 1);
    let idx = dst.index();
    let mut m = CMatrix::zeros(dst.dim(), n * src.dim());
    for j in 0..n {
        for (p, alpha) in src.labels().iter().enumerate() {
            let beta = multiset_insert(j, alpha);
            let value = (k as f64 + 1.0) * (multinomial(alpha) / multinomial(&beta)).sqrt();
            m[(idx.position(&beta).expect("label"), j * src.dim() + p)] = Complex::new(value, 0.0);
        }
    }
    LinearMap::new(Space::tensor(&[Space::dual(n), src]), dst, m)
}

/// `C : V* ⊗ S^k V* → S^{k-1} V*`, conformity factor `(n + k - 1) / k`.
pub fn contraction_projection(n: usize, k: usize) -> Result<LinearMap> {
    if k == 0 || n == 0 {
        return Err(Error::BadDegree { n, k, reason: "contraction needs k >= 1" });
    }
    let src = Space::symmetric(n, k);
    let dst = Space::symmetric(n, k - 1);
    let idx = dst.index();
    let mut m = CMatrix::zeros(dst.dim(), n * src.dim());
    for j in 0..n {
        for (p, alpha) in src.labels().iter().enumerate() {
            if let Some(gamma) = multiset_remove(j, alpha) {
                let value = (multinomial(&gamma) / multinomial(alpha)).sqrt();
                m[(idx.position(&gamma).expect("label"), j * src.dim() + p)] = Complex::new(value, 0.0);
            }
        }
    }
    LinearMap::new(Space::tensor(&[Space::dual(n), src]), dst, m)
}

/// Clifford multiplication `c : V ⊗ S → S`, conformity factor `n`.
pub fn clifford_projection(n: usize) -> Result<LinearMap> {
    if n == 0 {
        return Err(Error::BadDegree { n, k: 0, reason: "Clifford multiplication needs n >= 1" });
    }
    let gens = clifford_generators(n);
    let s = spinor_space(n);
    let d = s.dim();
    let mut m = CMatrix::zeros(d, n * d);
    for (i, g) in gens.iter().enumerate() {
        m.columns_mut(i * d, d).copy_from(g.entries());
    }
    LinearMap::new(Space::tensor(&[Space::base(n), s.clone()]), s, m)
}

/// Orthonormal basis (columns) of `Ker c ⊂ V* ⊗ S`, from the columns of `1 - c*c / n`.
pub fn clifford_kernel_basis(n: usize) -> Result<CMatrix> {
    let c = clifford_projection(n)?;
    let dim = c.domain().dim();
    let proj = CMatrix::identity(dim, dim) - c.entries().adjoint() * c.entries() / Complex::new(n as f64, 0.0);
    Ok(orthonormal_span(&proj, 1e-10))
}

/// Twistor projection `V* ⊗ S → Ker c`, an orthogonal projection (`ρ² = 1`).
///
/// As an endomorphism of `V* ⊗ S` it is `v ⊗ s ↦ v ⊗ s + (1/n) Σ e_i ⊗ c_i c_v s`;
/// the codomain carries the orthonormal kernel basis.
pub fn twistor_projection(n: usize) -> Result<LinearMap> {
    if n < 2 {
        return Err(Error::BadDegree { n, k: 0, reason: "twistor projection needs n >= 2" });
    }
    let basis = clifford_kernel_basis(n)?;
    let domain = Space::tensor(&[Space::dual(n), spinor_space(n)]);
    let codomain = Space::fiber(format!("ker c{n}"), basis.ncols());
    LinearMap::new(domain, codomain, basis.adjoint())
}

/// Hodge star `Λ^k → Λ^{n-k}`, `e_I ↦ sign(I, I^c) e_{I^c}`.
pub fn hodge_star(n: usize, k: usize) -> Result<LinearMap> {
    let src = Space::exterior(n, k)?;
    let dst = Space::exterior(n, n - k)?;
    let idx = dst.index();
    let mut m = CMatrix::zeros(dst.dim(), src.dim());
    for (p, set) in src.labels().iter().enumerate() {
        let (comp, sign) = crate::tensor::index::complement_sign(set, n);
        m[(idx.position(&comp).expect("label"), p)] = Complex::new(sign, 0.0);
    }
    LinearMap::new(src, dst, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::spinor_dim;

    fn gram_defect(p: &LinearMap, rho2: f64) -> f64 {
        let d = p.codomain().dim();
        (p.gram() - CMatrix::identity(d, d) * Complex::new(rho2, 0.0)).norm() / rho2
    }

    #[test]
    fn exterior_factors() {
        assert!(gram_defect(&exterior_projection(3, 1).unwrap(), 2.0) < 1e-12);
        assert!(gram_defect(&exterior_projection(4, 0).unwrap(), 1.0) < 1e-12);
        let p = exterior_projection(5, 2).unwrap();
        assert_eq!(p.codomain().dim(), 10);
        assert!(gram_defect(&p, 3.0) < 1e-12);
        assert!(exterior_projection(3, 3).is_err());
    }

    #[test]
    fn interior_factors() {
        assert!(gram_defect(&interior_projection(4, 1).unwrap(), 4.0) < 1e-12);
        assert!(gram_defect(&interior_projection(3, 3).unwrap(), 1.0) < 1e-12);
        // dense multiply oracle, entry by entry
        let p = interior_projection(6, 2).unwrap();
        let e = p.entries();
        for a in 0..e.nrows() {
            for b in 0..e.nrows() {
                let mut acc = Complex::new(0.0, 0.0);
                for c in 0..e.ncols() {
                    acc += e[(a, c)] * e[(b, c)].conj();
                }
                let want = if a == b { 5.0 } else { 0.0 };
                assert!((acc - Complex::new(want, 0.0)).norm() < 1e-12);
            }
        }
        assert!(interior_projection(3, 0).is_err());
    }

    #[test]
    fn symmetric_factors_and_adjoint() {
        assert!(gram_defect(&symmetrization_projection(3, 1).unwrap(), 4.0) < 1e-12);
        assert!(gram_defect(&symmetrization_projection(2, 0).unwrap(), 1.0) < 1e-12);
        assert!(gram_defect(&symmetrization_projection(4, 2).unwrap(), 9.0) < 1e-12);
        assert!(gram_defect(&contraction_projection(3, 2).unwrap(), 2.0) < 1e-12);
        assert!(gram_defect(&contraction_projection(2, 1).unwrap(), 2.0) < 1e-12);
        assert!(gram_defect(&contraction_projection(5, 3).unwrap(), 7.0 / 3.0) < 1e-12);
        assert!(contraction_projection(3, 0).is_err());
    }

    #[test]
    fn contraction_adjoint_is_scaled_symmetrization() {
        // (C_f)* B = (1/k) S(f ⊗ B), entrywise, for f = e_j
        for (n, k) in [(3, 2), (4, 1), (2, 3)] {
            let c = contraction_projection(n, k).unwrap();
            let s = symmetrization_projection(n, k - 1).unwrap();
            let dk = Space::symmetric(n, k).dim();
            let dk1 = Space::symmetric(n, k - 1).dim();
            for j in 0..n {
                let cj = c.entries().columns(j * dk, dk).into_owned();
                let sj = s.entries().columns(j * dk1, dk1).into_owned();
                assert!((cj.adjoint() - sj / Complex::new(k as f64, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetrization_adjoint_is_scaled_inclusion() {
        // S* = (k+1) ι with ι the inclusion of S^{k+1} in V* ⊗ S^k,
        // checked against an explicit tensor-power embedding.
        let (n, k) = (3usize, 2usize);
        let s = symmetrization_projection(n, k).unwrap();
        let embed = |tuple: &[usize]| -> Vec<f64> {
            let len = tuple.len();
            let mut v = vec![0.0; n.pow(len as u32)];
            let mut words = vec![Vec::new()];
            for _ in 0..len {
                words = words
                    .into_iter()
                    .flat_map(|w: Vec<usize>| {
                        (0..n).map(move |x| {
                            let mut w = w.clone();
                            w.push(x);
                            w
                        })
                    })
                    .collect();
            }
            let mut sorted_tuple = tuple.to_vec();
            sorted_tuple.sort();
            let norm = multinomial(&sorted_tuple).sqrt();
            for w in words {
                let mut ws = w.clone();
                ws.sort();
                if ws == sorted_tuple {
                    let pos = w.iter().fold(0, |acc, &x| acc * n + x);
                    v[pos] = 1.0 / norm;
                }
            }
            v
        };
        let big = Space::symmetric(n, k + 1);
        let small = Space::symmetric(n, k);
        let adj = s.adjoint();
        for (b, beta) in big.labels().iter().enumerate() {
            let tb = embed(beta);
            for j in 0..n {
                for (a, alpha) in small.labels().iter().enumerate() {
                    let ta = embed(alpha);
                    // <e_j ⊗ b_α, b_β> in the tensor power
                    let mut ip = 0.0;
                    for (pos, &x) in ta.iter().enumerate() {
                        ip += x * tb[j * n.pow(k as u32) + pos];
                    }
                    let got = adj.entries()[(j * small.dim() + a, b)];
                    assert!((got - Complex::new((k + 1) as f64 * ip, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn clifford_factor_and_adjoint_formula() {
        for n in 1..=4 {
            let c = clifford_projection(n).unwrap();
            assert!(gram_defect(&c, n as f64) < 1e-12);
            let d = spinor_dim(n);
            let gens = clifford_generators(n);
            let adj = c.adjoint();
            for (i, g) in gens.iter().enumerate() {
                let block = adj.entries().rows(i * d, d).into_owned();
                assert!((block + g.entries()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn twistor_kernel_property() {
        for n in 2..=5 {
            let p = twistor_projection(n).unwrap();
            let c = clifford_projection(n).unwrap();
            let d = spinor_dim(n);
            assert_eq!(p.codomain().dim(), n * d - d);
            assert!(gram_defect(&p, 1.0) < 1e-12);
            let kill = p.entries() * c.entries().adjoint();
            assert!(kill.norm() < 1e-12);
        }
    }

    #[test]
    fn hodge_star_squares_to_sign() {
        for n in 2..=5 {
            for k in 0..=n {
                let a = hodge_star(n, k).unwrap();
                let b = hodge_star(n, n - k).unwrap();
                let sq = b.compose(&a).unwrap();
                let sign = if (k * (n - k)) % 2 == 0 { 1.0 } else { -1.0 };
                let d = a.domain().dim();
                assert!((sq.entries() - CMatrix::identity(d, d) * C64::new(sign, 0.0)).norm() < 1e-14);
            }
        }
    }
}
