use serde::{Deserialize, Serialize};

use super::index::{increasing_tuples, nondecreasing_tuples, LabelIndex};
use crate::error::{Error, Result};

/// What a basis-indexed space is built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Base { n: usize },
    Dual { n: usize },
    ExteriorPower { n: usize, k: usize },
    SymmetricPower { n: usize, k: usize },
    TensorProduct(Vec<Space>),
    DirectSum(Vec<Space>),
    AbstractFiber(String),
}

/// A finite-dimensional inner-product space with a fixed orthonormal basis.
///
/// Basis labels are multi-indices in lexicographic order. For tensor products
/// the label of a basis tensor is the concatenation of the factor labels, with
/// the first factor varying slowest. Direct-sum labels are prefixed by the
/// summand index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    kind: SpaceKind,
    labels: Vec<Vec<usize>>,
}

impl Space {
    pub fn base(n: usize) -> Self {
        Self { kind: SpaceKind::Base { n }, labels: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn dual(n: usize) -> Self {
        Self { kind: SpaceKind::Dual { n }, labels: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn exterior(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::BadDegree { n, k, reason: "exterior degree exceeds dimension" });
        }
        Ok(Self { kind: SpaceKind::ExteriorPower { n, k }, labels: increasing_tuples(n, k) })
    }

    pub fn symmetric(n: usize, k: usize) -> Self {
        Self { kind: SpaceKind::SymmetricPower { n, k }, labels: nondecreasing_tuples(n, k) }
    }

    pub fn fiber(label: impl Into<String>, dim: usize) -> Self {
        Self { kind: SpaceKind::AbstractFiber(label.into()), labels: (0..dim).map(|i| vec![i]).collect() }
    }

    pub fn tensor(factors: &[Space]) -> Self {
        let mut labels: Vec<Vec<usize>> = vec![Vec::new()];
        for f in factors {
            labels = labels
                .iter()
                .flat_map(|pre| {
                    f.labels.iter().map(move |l| {
                        let mut v = pre.clone();
                        v.extend_from_slice(l);
                        v
                    })
                })
                .collect();
        }
        Self { kind: SpaceKind::TensorProduct(factors.to_vec()), labels }
    }

    pub fn direct_sum(summands: &[Space]) -> Self {
        let labels = summands
            .iter()
            .enumerate()
            .flat_map(|(b, s)| {
                s.labels.iter().map(move |l| {
                    let mut v = vec![b];
                    v.extend_from_slice(l);
                    v
                })
            })
            .collect();
        Self { kind: SpaceKind::DirectSum(summands.to_vec()), labels }
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn index(&self) -> LabelIndex {
        LabelIndex::new(self.labels.clone())
    }
}

/// Which power of the base covector space to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerKind {
    Exterior,
    Symmetric,
}

pub fn build_space(kind: PowerKind, n: usize, k: usize) -> Result<Space> {
    match kind {
        PowerKind::Exterior => Space::exterior(n, k),
        PowerKind::Symmetric => Ok(Space::symmetric(n, k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_dimensions() {
        assert_eq!(build_space(PowerKind::Exterior, 4, 2).unwrap().dim(), 6);
        assert_eq!(build_space(PowerKind::Symmetric, 3, 2).unwrap().dim(), 6);
        let top = build_space(PowerKind::Exterior, 5, 0).unwrap();
        assert_eq!(top.dim(), 1);
        assert_eq!(top.labels()[0], Vec::<usize>::new());
        assert!(matches!(build_space(PowerKind::Exterior, 3, 4), Err(Error::BadDegree { .. })));
    }

    #[test]
    fn tensor_labels_are_row_major() {
        let t = Space::tensor(&[Space::dual(2), Space::fiber("E", 3)]);
        assert_eq!(t.dim(), 6);
        assert_eq!(t.labels()[4], vec![1, 1]);
        let s = Space::direct_sum(&[Space::dual(2), Space::fiber("E", 1)]);
        assert_eq!(s.labels(), &[vec![0, 0], vec![0, 1], vec![1, 0]]);
    }
}
