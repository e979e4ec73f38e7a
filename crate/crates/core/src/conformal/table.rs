use nalgebra::Complex;
use serde::Serialize;

use super::catalog::{
    clifford_projection, contraction_projection, exterior_projection, interior_projection, symmetrization_projection,
    twistor_projection,
};
use super::report::measure_conformity;
use crate::error::{Error, Result};
use crate::rng::{master_rng, unit_covector};
use crate::tensor::{spinor_dim, CMatrix, LinearMap};

/// Unit vectors sampled per dimension for the twistor symbol check.
pub const TWISTOR_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constructor {
    Exterior,
    Interior,
    Symmetrization,
    Contraction,
    Clifford,
    Twistor,
}

impl Constructor {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exterior => "exterior",
            Self::Interior => "interior",
            Self::Symmetrization => "symmetrization",
            Self::Contraction => "contraction",
            Self::Clifford => "clifford",
            Self::Twistor => "twistor",
        }
    }
}

/// `max_v |P_v* P_v - (n-1)/n| ` over sampled unit `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistorSymbolCheck {
    pub expected: f64,
    pub max_deviation: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformityRow {
    pub constructor: Constructor,
    pub n: usize,
    pub k: Option<usize>,
    pub expected_rho_squared: f64,
    pub measured_rho_squared: f64,
    pub residual: f64,
    pub surjective: bool,
    pub certified: bool,
    pub twistor_symbol: Option<TwistorSymbolCheck>,
}

impl ConformityRow {
    pub fn rho_error(&self) -> f64 {
        (self.measured_rho_squared - self.expected_rho_squared).abs() / self.expected_rho_squared
    }

    /// Certified, with the measured factor equal to the closed form and any
    /// twistor symbol check inside `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.certified && self.rho_error() <= tol && self.twistor_symbol.as_ref().is_none_or(|t| t.max_deviation <= tol)
    }
}

fn row(constructor: Constructor, n: usize, k: Option<usize>, expected: f64, p: &LinearMap, tol: f64) -> ConformityRow {
    let report = measure_conformity(p, tol);
    ConformityRow {
        constructor,
        n,
        k,
        expected_rho_squared: expected,
        measured_rho_squared: report.rho_squared,
        residual: report.residual,
        surjective: report.surjective,
        certified: report.certified(),
        twistor_symbol: None,
    }
}

/// Deviation of `P_v* P_v` from `(n-1)/n id_S` at `samples` seeded unit vectors.
pub fn twistor_symbol_check(n: usize, samples: usize, seed: u64) -> Result<TwistorSymbolCheck> {
    let t = twistor_projection(n)?;
    let d = spinor_dim(n);
    let expected = (n as f64 - 1.0) / n as f64;
    let mut rng = master_rng(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..samples {
        let v = unit_covector(&mut rng, n);
        let mut pv = CMatrix::zeros(t.codomain().dim(), d);
        for (i, vi) in v.iter().enumerate() {
            pv += t.entries().columns(i * d, d) * Complex::new(*vi, 0.0);
        }
        let dev = (pv.adjoint() * &pv - CMatrix::identity(d, d) * Complex::new(expected, 0.0)).norm();
        max_deviation = max_deviation.max(dev);
    }
    Ok(TwistorSymbolCheck { expected, max_deviation, samples })
}

/// All catalog constructors for `n` in `2..=max_n`, each degree in `1..=n-1`
/// for the graded ones (`0..=n-1` for exterior, `1..=n` for interior).
pub fn conformity_table(max_n: usize, tol: f64, seed: u64) -> Result<Vec<ConformityRow>> {
    if max_n < 2 {
        return Err(Error::BadDegree { n: max_n, k: 0, reason: "the conformity table needs max-n >= 2" });
    }
    let mut rows = Vec::new();
    for n in 2..=max_n {
        let nf = n as f64;
        for k in 0..n {
            rows.push(row(Constructor::Exterior, n, Some(k), k as f64 + 1.0, &exterior_projection(n, k)?, tol));
        }
        for k in 1..=n {
            let expected = (n - k) as f64 + 1.0;
            rows.push(row(Constructor::Interior, n, Some(k), expected, &interior_projection(n, k)?, tol));
        }
        for k in 1..n {
            let expected = (k as f64 + 1.0).powi(2);
            rows.push(row(Constructor::Symmetrization, n, Some(k), expected, &symmetrization_projection(n, k)?, tol));
        }
        for k in 1..n {
            let expected = (nf + k as f64 - 1.0) / k as f64;
            rows.push(row(Constructor::Contraction, n, Some(k), expected, &contraction_projection(n, k)?, tol));
        }
        rows.push(row(Constructor::Clifford, n, None, nf, &clifford_projection(n)?, tol));
        let mut tw = row(Constructor::Twistor, n, None, 1.0, &twistor_projection(n)?, tol);
        tw.twistor_symbol = Some(twistor_symbol_check(n, TWISTOR_SAMPLES, seed.wrapping_add(n as u64))?);
        rows.push(tw);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_table_has_eight_rows() {
        let rows = conformity_table(2, 1e-10, 0).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.passes(1e-10)));
    }

    #[test]
    fn impossible_tolerance_fails_some_row() {
        let rows = conformity_table(3, 1e-20, 0).unwrap();
        assert!(rows.iter().any(|r| !r.passes(1e-20)));
    }

    #[test]
    fn twistor_symbol_is_scalar() {
        for n in 2..=5 {
            let c = twistor_symbol_check(n, 16, 3).unwrap();
            assert!(c.max_deviation < 1e-12, "n={n}: {}", c.max_deviation);
        }
    }
}
