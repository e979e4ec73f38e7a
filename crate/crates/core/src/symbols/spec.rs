use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{hermitian_eigen, CMatrix, LinearMap, Space, Spectrum};

/// A first-order operator described by its principal symbol `V* ⊗ E → F`.
///
/// The domain index of the symbol is `(i, e)` with the covector slot slowest,
/// so `P_ξ = Σ ξ_i P(e_i ⊗ ·)` is a weighted sum of column blocks.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorSpec {
    pub name: String,
    pub n: usize,
    pub fiber: Space,
    pub target: Space,
    pub full_symbol: LinearMap,
    pub declared_rho_squared: Option<f64>,
    pub declared_epsilon: Option<f64>,
}

impl OperatorSpec {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        fiber: Space,
        target: Space,
        full_symbol: LinearMap,
        declared_rho_squared: Option<f64>,
        declared_epsilon: Option<f64>,
    ) -> Result<Self> {
        let domain = Space::tensor(&[Space::dual(n), fiber.clone()]);
        if full_symbol.domain() != &domain || full_symbol.codomain() != &target {
            return Err(Error::ShapeMismatch("symbol must map V* ⊗ E to F".into()));
        }
        Ok(Self { name: name.into(), n, fiber, target, full_symbol, declared_rho_squared, declared_epsilon })
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber.dim()
    }

    /// Raw matrix of `P_ξ : E → F`.
    pub fn symbol_matrix(&self, xi: &[f64]) -> Result<CMatrix> {
        if xi.len() != self.n {
            return Err(Error::ShapeMismatch(format!("covector has {} entries, expected {}", xi.len(), self.n)));
        }
        if xi.iter().all(|&x| x == 0.0) || !xi.iter().all(|x| x.is_finite()) {
            return Err(Error::ZeroCovector);
        }
        let d = self.fiber_dim();
        let mut m = CMatrix::zeros(self.target.dim(), d);
        for (i, &x) in xi.iter().enumerate() {
            if x != 0.0 {
                m += self.full_symbol.entries().columns(i * d, d) * Complex::new(x, 0.0);
            }
        }
        Ok(m)
    }

    /// `P_ξ(v) = P(ξ ⊗ v)`.
    pub fn symbol_at(&self, xi: &[f64]) -> Result<LinearMap> {
        LinearMap::new(self.fiber.clone(), self.target.clone(), self.symbol_matrix(xi)?)
    }

    /// Spectrum of `P_ξ* P_ξ` on `E`.
    pub fn symbol_spectrum(&self, xi: &[f64]) -> Result<Spectrum> {
        let p = self.symbol_matrix(xi)?;
        hermitian_eigen(&(p.adjoint() * p)).map(|(s, _)| s)
    }

    /// Declared `(ρ², ε)`, required by the Kato checks.
    pub fn constants(&self) -> Result<(f64, f64)> {
        match (self.declared_rho_squared, self.declared_epsilon) {
            (Some(r), Some(e)) => Ok((r, e)),
            _ => Err(Error::BadConstants(format!("operator `{}` lacks declared ρ² and ε", self.name))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{catalog, OperatorName};

    #[test]
    fn connection_symbol_is_isometric() {
        let op = catalog(OperatorName::Connection, 3, 1, None).unwrap();
        let xi = [0.6, 0.0, 0.8];
        let s = op.symbol_spectrum(&xi).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-12));
    }

    #[test]
    fn dirac_symbol_is_clifford_generator() {
        let op = catalog(OperatorName::Dirac, 3, 0, None).unwrap();
        let p = op.symbol_at(&[1.0, 0.0, 0.0]).unwrap();
        let gens = crate::tensor::clifford_generators(3);
        assert!((p.entries() - gens[0].entries()).norm() < 1e-14);
        let s = op.symbol_spectrum(&[1.0, 0.0, 0.0]).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-12));
    }

    #[test]
    fn exterior_derivative_symbol_is_singular() {
        let op = catalog(OperatorName::ExteriorOnly, 3, 1, None).unwrap();
        let p = op.symbol_matrix(&[1.0, 0.0, 0.0]).unwrap();
        let (s, v) = hermitian_eigen(&(p.adjoint() * &p)).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-12);
        assert!(s.eigenvalues[1] > 0.5);
        // kernel = multiples of e1*
        assert!((v[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symbol_is_linear_in_xi() {
        let op = catalog(OperatorName::Twistor, 3, 0, None).unwrap();
        let a = op.symbol_matrix(&[0.3, -1.0, 2.0]).unwrap();
        let b = op.symbol_matrix(&[1.0, 0.5, 0.0]).unwrap();
        let ab = op.symbol_matrix(&[1.3, -0.5, 2.0]).unwrap();
        assert!((a + b - ab).norm() < 1e-13);
    }

    #[test]
    fn zero_covector_rejected() {
        let op = catalog(OperatorName::Dirac, 2, 0, None).unwrap();
        assert_eq!(op.symbol_at(&[0.0, 0.0]).unwrap_err(), Error::ZeroCovector);
    }
}
