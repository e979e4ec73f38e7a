//! Complex Clifford generators built from Pauli matrices.
//!
//! For `n = 2m` the generators are Jordan-Wigner strings
//! `σ3 ⊗ … ⊗ σ3 ⊗ iσ1 ⊗ 1 ⊗ …` and `σ3 ⊗ … ⊗ iσ2 ⊗ 1 ⊗ …` on `(C²)^{⊗m}`.
//! Odd `n = 2m + 1` appends the product of the even generators, multiplied by
//! `i` when needed so that its square is `-1`.

use super::map::{CMatrix, LinearMap, C64, I, ONE, ZERO};
use super::space::Space;

fn pauli(which: u8) -> CMatrix {
    match which {
        1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        _ => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

/// Spinor fiber dimension `2^{⌊n/2⌋}`.
pub fn spinor_dim(n: usize) -> usize {
    1 << (n / 2)
}

pub fn spinor_space(n: usize) -> Space {
    Space::fiber(format!("S{n}"), spinor_dim(n))
}

/// `n` skew-adjoint unitaries with `c_i c_j + c_j c_i = -2 δ_ij`.
pub fn clifford_generators(n: usize) -> Vec<LinearMap> {
    assert!(n >= 1, "Clifford generators need n >= 1");
    let m = n / 2;
    let mut gens: Vec<CMatrix> = Vec::with_capacity(n);
    for j in 0..m {
        for p in [1u8, 2u8] {
            let mut acc = CMatrix::identity(1, 1);
            for slot in 0..m {
                let factor = if slot < j {
                    pauli(3)
                } else if slot == j {
                    pauli(p) * I
                } else {
                    CMatrix::identity(2, 2)
                };
                acc = acc.kronecker(&factor);
            }
            gens.push(acc);
        }
    }
    if n % 2 == 1 {
        let d = spinor_dim(n);
        let mut prod = CMatrix::identity(d, d);
        for g in &gens {
            prod *= g;
        }
        let square = &prod * &prod;
        if (square - CMatrix::identity(d, d)).norm() < 1e-12 {
            prod *= I;
        }
        gens.push(prod);
    }
    let space = spinor_space(n);
    gens.into_iter().map(|g| LinearMap::new(space.clone(), space.clone(), g).expect("generator shape")).collect()
}

/// Largest residual over `‖c_i c_j + c_j c_i + 2 δ_ij‖`, `‖c_i + c_i*‖` and `‖c_i c_i* - 1‖`.
pub fn clifford_relation_residual(gens: &[LinearMap]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in gens.iter().enumerate() {
        let d = a.entries().nrows();
        let id = CMatrix::identity(d, d);
        worst = worst.max((a.entries() + a.entries().adjoint()).norm());
        worst = worst.max((a.entries() * a.entries().adjoint() - &id).norm());
        for (j, b) in gens.iter().enumerate().skip(i) {
            let mut anti = a.entries() * b.entries() + b.entries() * a.entries();
            if i == j {
                anti += &id * C64::new(2.0, 0.0);
            }
            worst = worst.max(anti.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_generator_is_i() {
        let g = clifford_generators(1);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].entries()[(0, 0)], I);
    }

    #[test]
    fn relations_hold_up_to_eight() {
        for n in 1..=8 {
            let g = clifford_generators(n);
            assert_eq!(g.len(), n);
            assert_eq!(g[0].domain().dim(), spinor_dim(n));
            assert!(clifford_relation_residual(&g) <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn four_generators_on_four_dimensions() {
        let g = clifford_generators(4);
        assert_eq!(g[3].entries().nrows(), 4);
        let mut pairs = 0;
        for i in 0..4 {
            for j in i..4 {
                let mut anti = g[i].entries() * g[j].entries() + g[j].entries() * g[i].entries();
                if i == j {
                    anti += CMatrix::identity(4, 4) * C64::new(2.0, 0.0);
                }
                assert!(anti.norm() <= 1e-12);
                pairs += 1;
            }
        }
        assert_eq!(pairs, 10);
    }
}
