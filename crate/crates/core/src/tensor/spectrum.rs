use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use super::map::{hermitian_defect, CMatrix, LinearMap};
use crate::error::{Error, Result};

/// Relative asymmetry accepted as hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Ascending eigenvalues of a hermitian map, with the worst eigenpair residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

impl Spectrum {
    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }
}

pub fn hermitian_spectrum(m: &LinearMap) -> Result<Spectrum> {
    if m.domain() != m.codomain() {
        return Err(Error::ShapeMismatch("spectrum needs an endomorphism".into()));
    }
    hermitian_eigen(m.entries()).map(|(s, _)| s)
}

/// Eigen-decomposition of a hermitian matrix; eigenvector columns follow the
/// ascending eigenvalue order.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Spectrum, CMatrix)> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch("spectrum needs a square matrix".into()));
    }
    let d = m.nrows();
    if d == 0 {
        return Ok((Spectrum { eigenvalues: vec![], residual: 0.0 }, CMatrix::zeros(0, 0)));
    }
    let scale = m.norm();
    let asymmetry = hermitian_defect(m);
    if asymmetry > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { asymmetry });
    }
    let sym = (m + m.adjoint()).unscale(2.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vectors = CMatrix::zeros(d, d);
    let mut eigenvalues = Vec::with_capacity(d);
    let mut residual: f64 = 0.0;
    for (j, &src) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[src];
        let v = eig.eigenvectors.column(src);
        residual = residual.max((m * v - v * nalgebra::Complex::new(lambda, 0.0)).norm());
        vectors.set_column(j, &v);
        eigenvalues.push(lambda);
    }
    Ok((Spectrum { eigenvalues, residual }, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_normal_matrix, master_rng};
    use crate::tensor::{Space, ONE};

    #[test]
    fn identity_spectrum() {
        let s = hermitian_spectrum(&LinearMap::identity(Space::fiber("E", 4))).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0; 4]);
    }

    #[test]
    fn diagonal_sorted() {
        let sp = Space::fiber("E", 2);
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE * 5.0, ONE * 2.0]));
        let s = hermitian_spectrum(&LinearMap::new(sp.clone(), sp, m).unwrap()).unwrap();
        assert_eq!(s.eigenvalues, vec![2.0, 5.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = ONE;
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn two_by_two_matches_quadratic_formula() {
        let mut rng = master_rng(11);
        for _ in 0..20 {
            let a = complex_normal_matrix(&mut rng, 2, 2);
            let m = a.adjoint() * &a;
            let (s, _) = hermitian_eigen(&m).unwrap();
            // λ² - tr λ + det = 0, both roots real for hermitian m.
            let tr = (m[(0, 0)] + m[(1, 1)]).re;
            let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            let roots = [(tr - disc) / 2.0, (tr + disc) / 2.0];
            for (got, want) in s.eigenvalues.iter().zip(roots) {
                assert!((got - want).abs() <= 1e-10 * tr.max(1.0));
            }
            assert!(s.residual <= 1e-10 * m.norm());
        }
    }

    #[test]
    fn gram_spectra_are_nonnegative() {
        let mut rng = master_rng(5);
        for d in 1..7 {
            let a = complex_normal_matrix(&mut rng, d + 1, d);
            let (s, v) = hermitian_eigen(&(a.adjoint() * &a)).unwrap();
            assert!(s.min().unwrap() >= -1e-10);
            let gram = v.adjoint() * &v;
            assert!((gram - CMatrix::identity(d, d)).norm() < 1e-10);
        }
    }
}
