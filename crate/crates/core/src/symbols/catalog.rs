use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::spec::OperatorSpec;
use crate::conformal::{clifford_projection, exterior_projection, interior_projection, twistor_projection};
use crate::error::{Error, Result};
use crate::tensor::{spinor_space, LinearMap, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorName {
    Connection,
    Dirac,
    Hodge,
    ExteriorOnly,
    InteriorOnly,
    Twistor,
}

impl OperatorName {
    pub const ALL: [OperatorName; 6] = [
        OperatorName::Connection,
        OperatorName::Dirac,
        OperatorName::Hodge,
        OperatorName::ExteriorOnly,
        OperatorName::InteriorOnly,
        OperatorName::Twistor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorName::Connection => "connection",
            OperatorName::Dirac => "dirac",
            OperatorName::Hodge => "hodge",
            OperatorName::ExteriorOnly => "exterior-only",
            OperatorName::InteriorOnly => "interior-only",
            OperatorName::Twistor => "twistor",
        }
    }

    /// Whether the form degree `k` is part of the operator reference.
    pub fn uses_degree(self) -> bool {
        !matches!(self, OperatorName::Dirac | OperatorName::Twistor)
    }
}

impl fmt::Display for OperatorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OperatorName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Weights `(a, b)` of the `d` and `d*` parts of a Hodge symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HodgeWeights {
    pub exterior: f64,
    pub interior: f64,
}

impl HodgeWeights {
    /// `(1/√(k+1), 1/√(n-k+1))`, which makes the stacked symbol an orthogonal projection.
    pub fn normalized(n: usize, k: usize) -> Self {
        Self { exterior: 1.0 / ((k + 1) as f64).sqrt(), interior: 1.0 / ((n - k + 1) as f64).sqrt() }
    }

    pub fn unit() -> Self {
        Self { exterior: 1.0, interior: 1.0 }
    }
}

/// Catalog reference `name:n[:k]` as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorRef {
    pub name: OperatorName,
    pub n: usize,
    pub k: usize,
}

impl FromStr for OperatorRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name: OperatorName = parts.next().unwrap_or_default().parse()?;
        let num = |p: Option<&str>, what: &str| -> Result<Option<usize>> {
            p.map(|v| v.parse::<usize>().map_err(|_| Error::UnknownName(format!("{s}: bad {what} `{v}`")))).transpose()
        };
        let n = num(parts.next(), "dimension")?.ok_or_else(|| Error::UnknownName(format!("{s}: missing n")))?;
        let k = num(parts.next(), "degree")?.unwrap_or(match name {
            OperatorName::Hodge | OperatorName::ExteriorOnly | OperatorName::InteriorOnly => 1,
            _ => 0,
        });
        if parts.next().is_some() {
            return Err(Error::UnknownName(format!("{s}: too many fields")));
        }
        Ok(Self { name, n, k })
    }
}

impl fmt::Display for OperatorRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.name.uses_degree() {
            write!(f, "{}:{}:{}", self.name, self.n, self.k)
        } else {
            write!(f, "{}:{}", self.name, self.n)
        }
    }
}

impl OperatorRef {
    pub fn build(&self) -> Result<OperatorSpec> {
        catalog(self.name, self.n, self.k, None)
    }
}

fn forms_domain(n: usize, k: usize) -> Result<(Space, Space)> {
    let forms = Space::exterior(n, k)?;
    Ok((forms.clone(), Space::tensor(&[Space::dual(n), forms])))
}

/// Build a catalog operator.
///
/// * `connection` — `∇` on `Λ^k V*`, declared `(1, 1)`.
/// * `dirac` — Clifford multiplication on spinors, `(n, 1)`.
/// * `hodge` — `a ε ⊕ -b ι` on `Λ^k`, `1 <= k <= n-1`; default weights give `(1, min{1/(k+1), 1/(n-k+1)})`.
/// * `exterior-only` — `ε` on `Λ^k`, `(k+1, 0)` for `k >= 1`.
/// * `interior-only` — `-ι` on `Λ^k`, `(n-k+1, 0)` for `k <= n-1`.
/// * `twistor` — projection onto `Ker c`, `(1, (n-1)/n)`.
pub fn catalog(name: OperatorName, n: usize, k: usize, weights: Option<HodgeWeights>) -> Result<OperatorSpec> {
    if n == 0 {
        return Err(Error::BadDegree { n, k, reason: "dimension must be positive" });
    }
    let label = OperatorRef { name, n, k }.to_string();
    match name {
        OperatorName::Connection => {
            let (forms, domain) = forms_domain(n, k)?;
            let p = LinearMap::identity(domain.clone());
            OperatorSpec::new(label, n, forms, domain, p, Some(1.0), Some(1.0))
        }
        OperatorName::Dirac => {
            let s = spinor_space(n);
            let c = clifford_projection(n)?;
            let p = c.relabel(Space::tensor(&[Space::dual(n), s.clone()]), s.clone())?;
            OperatorSpec::new(label, n, s.clone(), s, p, Some(n as f64), Some(1.0))
        }
        OperatorName::Twistor => {
            let p = twistor_projection(n)?;
            let eps = (n as f64 - 1.0) / n as f64;
            OperatorSpec::new(label, n, spinor_space(n), p.codomain().clone(), p, Some(1.0), Some(eps))
        }
        OperatorName::ExteriorOnly => {
            let p = exterior_projection(n, k)?;
            let eps = if k == 0 { 1.0 } else { 0.0 };
            let forms = Space::exterior(n, k)?;
            OperatorSpec::new(label, n, forms, p.codomain().clone(), p, Some((k + 1) as f64), Some(eps))
        }
        OperatorName::InteriorOnly => {
            let p = interior_projection(n, k)?.scale(-1.0);
            let eps = if k == n { 1.0 } else { 0.0 };
            let forms = Space::exterior(n, k)?;
            OperatorSpec::new(label, n, forms, p.codomain().clone(), p, Some((n - k + 1) as f64), Some(eps))
        }
        OperatorName::Hodge => {
            if k == 0 || k >= n {
                return Err(Error::BadDegree { n, k, reason: "hodge operator needs 1 <= k <= n - 1" });
            }
            let w = weights.unwrap_or_else(|| HodgeWeights::normalized(n, k));
            let d = exterior_projection(n, k)?.scale(w.exterior);
            let dstar = interior_projection(n, k)?.scale(-w.interior);
            let p = LinearMap::stack(&[d, dstar])?;
            let a2 = w.exterior * w.exterior * (k + 1) as f64;
            let b2 = w.interior * w.interior * (n - k + 1) as f64;
            let rho2 = ((a2 - b2).abs() <= 1e-12 * a2.max(b2)).then_some(a2);
            let eps = (w.exterior * w.exterior).min(w.interior * w.interior);
            let forms = Space::exterior(n, k)?;
            OperatorSpec::new(label, n, forms, p.codomain().clone(), p, rho2, Some(eps))
        }
    }
}

/// Twist by an auxiliary fiber: symbol `P ⊗ id_{E2}` on `V* ⊗ (E ⊗ E2)`.
pub fn twist(op: &OperatorSpec, extra: &Space) -> Result<OperatorSpec> {
    let id = LinearMap::identity(extra.clone());
    let fiber = Space::tensor(&[op.fiber.clone(), extra.clone()]);
    let target = Space::tensor(&[op.target.clone(), extra.clone()]);
    let p = op.full_symbol.kron(&id).relabel(Space::tensor(&[Space::dual(op.n), fiber.clone()]), target.clone())?;
    OperatorSpec::new(
        format!("{}⊗{}", op.name, extra.dim()),
        op.n,
        fiber,
        target,
        p,
        op.declared_rho_squared,
        op.declared_epsilon,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{conformity_factor, DEFAULT_CONFORMITY_TOL};
    use crate::symbols::{ellipticity_constant, Sampling};

    #[test]
    fn declared_values() {
        let d = catalog(OperatorName::Dirac, 4, 0, None).unwrap();
        assert_eq!(d.constants().unwrap(), (4.0, 1.0));
        let t = catalog(OperatorName::Twistor, 3, 0, None).unwrap();
        assert_eq!(t.declared_rho_squared, Some(1.0));
        assert!((t.declared_epsilon.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let h = catalog(OperatorName::Hodge, 4, 2, None).unwrap();
        assert!((h.declared_rho_squared.unwrap() - 1.0).abs() < 1e-12);
        assert!((h.declared_epsilon.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let measured = ellipticity_constant(&h, Sampling::default()).unwrap();
        assert!((measured.epsilon - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn unnormalized_hodge_is_flagged() {
        let h = catalog(OperatorName::Hodge, 5, 2, Some(HodgeWeights::unit())).unwrap();
        assert_eq!(h.declared_rho_squared, None);
        assert!(conformity_factor(&h.full_symbol, DEFAULT_CONFORMITY_TOL).is_err());
    }

    #[test]
    fn degree_and_name_errors() {
        assert!(matches!(catalog(OperatorName::Hodge, 4, 0, None), Err(Error::BadDegree { .. })));
        assert!(matches!(catalog(OperatorName::Hodge, 4, 4, None), Err(Error::BadDegree { .. })));
        assert!(matches!("laplace:3".parse::<OperatorName>(), Err(Error::UnknownName(_))));
        assert!("dirac".parse::<OperatorRef>().is_err());
    }

    #[test]
    fn references_round_trip() {
        let r: OperatorRef = "hodge:6:2".parse().unwrap();
        assert_eq!((r.name, r.n, r.k), (OperatorName::Hodge, 6, 2));
        assert_eq!(r.to_string(), "hodge:6:2");
        let d: OperatorRef = "dirac:4".parse().unwrap();
        assert_eq!(d.to_string(), "dirac:4");
    }

    #[test]
    fn twist_by_scalars_is_a_relabeling() {
        let op = catalog(OperatorName::Dirac, 3, 0, None).unwrap();
        let t = twist(&op, &Space::fiber("L", 1)).unwrap();
        assert_eq!(t.full_symbol.entries(), op.full_symbol.entries());
    }

    #[test]
    fn twist_preserves_constants() {
        let s = Sampling::default();
        let dirac = catalog(OperatorName::Dirac, 3, 0, None).unwrap();
        let t = twist(&dirac, &Space::fiber("E", 2)).unwrap();
        assert!((ellipticity_constant(&t, s).unwrap().epsilon - 1.0).abs() < 1e-10);
        let hodge = catalog(OperatorName::Hodge, 4, 1, None).unwrap();
        let t = twist(&hodge, &Space::fiber("E", 3)).unwrap();
        assert!((ellipticity_constant(&t, s).unwrap().epsilon - 0.25).abs() < 1e-10);
        let r = conformity_factor(&t.full_symbol, DEFAULT_CONFORMITY_TOL).unwrap();
        assert!((r.rho_squared - 1.0).abs() < 1e-12);
    }
}
