//! The constants `c̃` of the extended Kato inequalities.
//!
//! Every formula is generic over the scalar so the same code runs in `f64`
//! for the fuzzers and in exact rationals for the constant tables.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative value or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

pub type ExtendedReal = Extended<f64>;

impl<T> Extended<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(t) => Some(t),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }
}

impl<T: Clone + PartialOrd> Extended<T> {
    pub fn min(self, other: Self) -> Self {
        match (self, other) {
            (Extended::Infinite, x) | (x, Extended::Infinite) => x,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(if b < a { b } else { a }),
        }
    }
}

impl<T: Clone + num_traits::Num> Extended<T> {
    /// Multiply by a positive finite factor.
    pub fn scale(self, s: T) -> Self {
        match self {
            Extended::Finite(t) => Extended::Finite(t * s),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl ExtendedReal {
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(t) => t,
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(t) => t.fmt(f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Finite values serialize as numbers, infinity as the string `"inf"`.
impl<T: Serialize> Serialize for Extended<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(t) => t.serialize(s),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `1/a` on the vanishing branch, `c/(1+ac)` otherwise.
pub fn ctilde_lemma<T>(c: T, a: T, vanishing: bool) -> Extended<T>
where
    T: Clone + num_traits::Num,
{
    if vanishing {
        if a.is_zero() {
            Extended::Infinite
        } else {
            Extended::Finite(T::one() / a)
        }
    } else {
        let denom = T::one() + a * c.clone();
        Extended::Finite(c / denom)
    }
}

/// `ε/(ρ²-ε)` on the vanishing branch, `εc/(1+(ρ²-ε)c)` otherwise.
pub fn ctilde_operator<T>(c: T, rho_squared: T, epsilon: T, vanishing: bool) -> Result<Extended<T>>
where
    T: Clone + num_traits::Num + PartialOrd + fmt::Debug,
{
    if epsilon <= T::zero() || epsilon > rho_squared {
        return Err(Error::BadConstants(format!("need 0 < ε <= ρ², got ε = {epsilon:?}, ρ² = {rho_squared:?}")));
    }
    let gap = rho_squared - epsilon.clone();
    Ok(ctilde_lemma(c, gap, vanishing).scale(epsilon))
}

/// Branch values of the Hodge inequality and their minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HodgePair<T> {
    pub ctilde: T,
    pub ctilde_star: T,
    pub min: T,
}

/// `c̃ ∈ {1/k, c/(1+kc)}` and `c̃* ∈ {1/(n-k), c*/(1+(n-k)c*)}`.
pub fn hodge_ctilde_pair<T>(
    c: T,
    c_star: T,
    k: usize,
    n: usize,
    d_vanishing: bool,
    dstar_vanishing: bool,
) -> Result<HodgePair<T>>
where
    T: Clone + num_traits::Num + PartialOrd,
{
    if k == 0 || k >= n {
        return Err(Error::BadDegree { n, k, reason: "hodge inequality needs 1 <= k <= n - 1" });
    }
    let count = |m: usize| (0..m).fold(T::zero(), |acc, _| acc + T::one());
    let finite = |e: Extended<T>| e.finite().expect("positive degree gives a finite constant");
    let ctilde = finite(ctilde_lemma(c, count(k), d_vanishing));
    let ctilde_star = finite(ctilde_lemma(c_star, count(n - k), dstar_vanishing));
    let min = if ctilde_star < ctilde { ctilde_star.clone() } else { ctilde.clone() };
    Ok(HodgePair { ctilde, ctilde_star, min })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(a: i64, b: i64) -> Q {
        Ratio::new(a, b)
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(ctilde_lemma(q(1, 1), q(2, 1), false), Extended::Finite(q(1, 3)));
        assert_eq!(ctilde_lemma(q(0, 1), q(5, 1), false), Extended::Finite(q(0, 1)));
        assert_eq!(ctilde_lemma(q(7, 1), q(2, 1), true), Extended::Finite(q(1, 2)));
        assert_eq!(ctilde_lemma(1.0, 0.0, true), Extended::Infinite);
    }

    #[test]
    fn operator_examples() {
        // Dirac: ρ² = n, ε = 1.
        assert_eq!(ctilde_operator(q(1, 1), q(4, 1), q(1, 1), false).unwrap(), Extended::Finite(q(1, 4)));
        // Twistor: ρ² = 1, ε = (n-1)/n.
        for n in 2..9i64 {
            let eps = q(n - 1, n);
            assert_eq!(ctilde_operator(q(3, 1), q(1, 1), eps, true).unwrap(), Extended::Finite(q(n - 1, 1)));
        }
        assert_eq!(ctilde_operator(q(1, 1), q(1, 1), q(2, 3), false).unwrap(), Extended::Finite(q(1, 2)));
        assert_eq!(ctilde_operator(2.0, 1.0, 1.0, true).unwrap(), Extended::Infinite);
        assert_eq!(ctilde_operator(2.0, 1.0, 1.0, false).unwrap(), Extended::Finite(2.0));
        assert!(matches!(ctilde_operator(1.0, 1.0, 0.0, true), Err(Error::BadConstants(_))));
        assert!(matches!(ctilde_operator(1.0, 1.0, 1.5, true), Err(Error::BadConstants(_))));
    }

    #[test]
    fn hodge_examples() {
        let p = hodge_ctilde_pair(q(0, 1), q(0, 1), 2, 4, true, true).unwrap();
        assert_eq!(p.min, q(1, 2));
        let p = hodge_ctilde_pair(q(0, 1), q(0, 1), 2, 6, true, true).unwrap();
        assert_eq!(p.min, q(1, 4));
        let p = hodge_ctilde_pair(q(1, 1), q(1, 1), 1, 5, false, false).unwrap();
        assert_eq!((p.ctilde, p.ctilde_star, p.min), (q(1, 2), q(1, 5), q(1, 5)));
        assert!(hodge_ctilde_pair(1.0, 1.0, 0, 3, true, true).is_err());
        assert!(hodge_ctilde_pair(1.0, 1.0, 3, 3, true, true).is_err());
    }

    #[test]
    fn vanishing_branch_dominates() {
        for a in [0.5, 1.0, 3.0, 7.0] {
            let top = ctilde_lemma(0.0, a, true).to_f64();
            for c in [0.0, 1e-3, 1.0, 10.0, 1e6] {
                assert!(ctilde_lemma(c, a, false).to_f64() < top);
            }
        }
    }

    #[test]
    fn large_coupling_limit() {
        for a in [1.0, 2.0, 5.0] {
            let g3 = 1.0 / a - ctilde_lemma(1e3, a, false).to_f64();
            let g6 = 1.0 / a - ctilde_lemma(1e6, a, false).to_f64();
            assert!(g3 > g6 && g6 > 0.0);
            // 1/a - c/(1+ac) = 1/(a(1+ac)) ≈ 1/(a² c)
            assert!((g3 * a * a * 1e3 - 1.0).abs() < 1e-2);
            assert!((g6 * a * a * 1e6 - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn infinity_serializes_as_string() {
        assert_eq!(serde_json::to_string(&ExtendedReal::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Extended::Finite(0.5)).unwrap(), "0.5");
        assert_eq!(ExtendedReal::Infinite.min(Extended::Finite(2.0)), Extended::Finite(2.0));
    }
}
