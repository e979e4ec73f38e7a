//! Ellipticity constants `ε = inf_{|ξ|=1} min Spec(P_ξ* P_ξ)`.
//!
//! Symbols whose spectrum of `P_ξ* P_ξ` is the same at every sampled covector
//! take the exact value at `e_1*`. Others are minimized over a nested
//! quasi-uniform sphere sample followed by a local quadratic search on the
//! sphere; that value is an upper bound for the infimum.

use serde::{Deserialize, Serialize};

use super::spec::OperatorSpec;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Spectra closer than this (relative to `max(1, λ_max)`) count as equal.
pub const INVARIANCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub coarse_count: usize,
    pub refine_steps: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { coarse_count: 256, refine_steps: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticityResult {
    pub epsilon: f64,
    pub argmin_xi: Vec<f64>,
    pub invariant: bool,
    pub samples: usize,
    pub refinement_steps: usize,
}

fn golden_ratio_power_root(d: usize) -> f64 {
    // unique positive root of x^{d+1} = x + 1
    let mut x = 2.0f64;
    for _ in 0..64 {
        let f = x.powi(d as i32 + 1) - x - 1.0;
        let df = (d as f64 + 1.0) * x.powi(d as i32) - 1.0;
        x -= f / df;
    }
    x
}

/// First `count` points of a nested quasi-uniform design on `S^{n-1}`.
///
/// `n = 2` uses golden-angle placement, `n = 3` an area-preserving cylinder
/// map of a Kronecker sequence, and `n >= 4` Box-Muller on an additive
/// generalized-golden-ratio sequence. Every design is a prefix of the longer
/// ones, so adding points never removes a candidate.
pub fn sphere_design(n: usize, count: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::PI;
    let frac = |x: f64| x - x.floor();
    match n {
        0 => vec![],
        1 => (0..count).map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }]).collect(),
        2 => {
            let g = golden_ratio_power_root(1).recip();
            (0..count)
                .map(|i| {
                    let t = 2.0 * PI * frac(i as f64 * g);
                    vec![t.cos(), t.sin()]
                })
                .collect()
        }
        3 => {
            let phi = golden_ratio_power_root(2);
            let (a1, a2) = (phi.recip(), phi.powi(2).recip());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * frac(0.5 + i as f64 * a1);
                    let t = 2.0 * PI * frac(0.5 + i as f64 * a2);
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        _ => {
            let d = n + n % 2;
            let phi = golden_ratio_power_root(d);
            let alphas: Vec<f64> = (1..=d).map(|j| phi.powi(j as i32).recip()).collect();
            (0..count)
                .map(|i| {
                    let u: Vec<f64> = alphas.iter().map(|a| frac(0.5 + i as f64 * a)).collect();
                    let mut g = Vec::with_capacity(d);
                    for pair in u.chunks(2) {
                        let r = (-2.0 * pair[0].max(1e-300).ln()).sqrt();
                        let t = 2.0 * PI * pair[1];
                        g.push(r * t.cos());
                        g.push(r * t.sin());
                    }
                    g.truncate(n);
                    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                    g.iter().map(|x| x / norm).collect()
                })
                .collect()
        }
    }
}

fn spectra_agree(a: &[f64], b: &[f64]) -> bool {
    let scale = a.iter().chain(b).fold(1.0f64, |m, x| m.max(x.abs()));
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= INVARIANCE_TOL * scale)
}

/// True iff the sorted spectrum of `P_ξ* P_ξ` agrees across `sample_count`
/// design covectors (plus `e_1*`).
pub fn invariance_check(op: &OperatorSpec, sample_count: usize) -> Result<bool> {
    invariance_check_with(op, sample_count, Execution::default())
}

pub fn invariance_check_with(op: &OperatorSpec, sample_count: usize, exec: Execution) -> Result<bool> {
    if sample_count < 2 {
        return Err(Error::BadSampleCount("invariance check needs at least 2 covectors".into()));
    }
    let reference = op.symbol_spectrum(&unit_axis(op.n))?.eigenvalues;
    let design = sphere_design(op.n, sample_count);
    let spectra = exec.map(design.len(), |i| op.symbol_spectrum(&design[i]).map(|s| s.eigenvalues));
    for s in spectra {
        if !spectra_agree(&reference, &s?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn unit_axis(n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[0] = 1.0;
    e
}

fn min_eig(op: &OperatorSpec, xi: &[f64]) -> f64 {
    op.symbol_spectrum(xi).ok().and_then(|s| s.min()).unwrap_or(f64::INFINITY)
}

pub fn ellipticity_constant(op: &OperatorSpec, sampling: Sampling) -> Result<EllipticityResult> {
    ellipticity_constant_with(op, sampling, Execution::default())
}

pub fn ellipticity_constant_with(op: &OperatorSpec, sampling: Sampling, exec: Execution) -> Result<EllipticityResult> {
    let axis = unit_axis(op.n);
    let count = sampling.coarse_count.max(2);
    if invariance_check_with(op, count, exec)? {
        return Ok(EllipticityResult {
            epsilon: min_eig(op, &axis).max(0.0),
            argmin_xi: axis,
            invariant: true,
            samples: count,
            refinement_steps: 0,
        });
    }
    let (epsilon, argmin_xi) = sampled_minimum(op, sampling, exec);
    Ok(EllipticityResult {
        epsilon: epsilon.max(0.0),
        argmin_xi,
        invariant: false,
        samples: count,
        refinement_steps: sampling.refine_steps,
    })
}

/// Coarse design minimum followed by `refine_steps` rounds of local search.
/// Only improvements are accepted, so the value is non-increasing in both
/// `coarse_count` (nested designs, no refinement) and `refine_steps`.
pub fn sampled_minimum(op: &OperatorSpec, sampling: Sampling, exec: Execution) -> (f64, Vec<f64>) {
    let n = op.n;
    let design = sphere_design(n, sampling.coarse_count.max(1));
    let values = exec.map(design.len(), |i| min_eig(op, &design[i]));
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    let mut xi = design[best].clone();
    let mut f0 = values[best];
    if n < 2 {
        return (f0, xi);
    }
    let mut h = 0.5 * (std::f64::consts::PI / (design.len() as f64).powf(1.0 / (n as f64 - 1.0))).min(1.0);
    let on_sphere = |base: &[f64], dir: &[f64], t: f64| -> Vec<f64> {
        let p: Vec<f64> = base.iter().zip(dir).map(|(b, d)| t.cos() * b + t.sin() * d).collect();
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        p.iter().map(|x| x / norm).collect()
    };
    for _ in 0..sampling.refine_steps {
        for dir in tangent_basis(&xi) {
            let minus = on_sphere(&xi, &dir, -h);
            let plus = on_sphere(&xi, &dir, h);
            let (fm, fp) = (min_eig(op, &minus), min_eig(op, &plus));
            let mut candidates = vec![(fm, minus), (fp, plus)];
            let curvature = fm - 2.0 * f0 + fp;
            if curvature > 0.0 {
                let t = (h * (fm - fp) / (2.0 * curvature)).clamp(-h, h);
                let q = on_sphere(&xi, &dir, t);
                candidates.push((min_eig(op, &q), q));
            }
            for (f, p) in candidates {
                if f < f0 {
                    f0 = f;
                    xi = p;
                }
            }
        }
        h *= 0.5;
    }
    (f0, xi)
}

/// Orthonormal basis of `ξ^⊥ ⊂ R^n`.
pub fn tangent_basis(xi: &[f64]) -> Vec<Vec<f64>> {
    let n = xi.len();
    let mut basis: Vec<Vec<f64>> = vec![xi.to_vec()];
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.iter().map(|x| x / norm).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    basis.remove(0);
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{catalog, OperatorName};
    use crate::tensor::{LinearMap, Space};

    fn first_coordinate_symbol(n: usize, d: usize) -> OperatorSpec {
        // P(ξ ⊗ v) = ξ_1 v
        let fiber = Space::fiber("E", d);
        let domain = Space::tensor(&[Space::dual(n), fiber.clone()]);
        let mut m = nalgebra::DMatrix::<f64>::zeros(d, n * d);
        for j in 0..d {
            m[(j, j)] = 1.0;
        }
        let p = LinearMap::from_real(domain, fiber.clone(), &m).unwrap();
        OperatorSpec::new("first-coordinate", n, fiber.clone(), fiber, p, None, None).unwrap()
    }

    #[test]
    fn designs_are_unit_and_nested() {
        for n in 1..=6 {
            let small = sphere_design(n, 17);
            let big = sphere_design(n, 40);
            assert_eq!(&big[..17], &small[..]);
            for p in &big {
                let norm: f64 = p.iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn design_covers_the_sphere() {
        // every axis direction has a nearby design point
        let pts = sphere_design(3, 400);
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                let best = pts.iter().map(|p| sign * p[axis]).fold(-1.0f64, f64::max);
                assert!(best > 0.98, "axis {axis} sign {sign}: {best}");
            }
        }
    }

    #[test]
    fn invariance_examples() {
        let dirac = catalog(OperatorName::Dirac, 4, 0, None).unwrap();
        assert!(invariance_check(&dirac, 32).unwrap());
        let twistor = catalog(OperatorName::Twistor, 3, 0, None).unwrap();
        assert!(invariance_check(&twistor, 32).unwrap());
        assert!(!invariance_check(&first_coordinate_symbol(3, 2), 32).unwrap());
        assert!(invariance_check(&dirac, 1).is_err());
    }

    #[test]
    fn catalog_constants() {
        let s = Sampling::default();
        for n in 2..=5 {
            let d = ellipticity_constant(&catalog(OperatorName::Dirac, n, 0, None).unwrap(), s).unwrap();
            assert!(d.invariant && (d.epsilon - 1.0).abs() < 1e-9);
            let t = ellipticity_constant(&catalog(OperatorName::Twistor, n, 0, None).unwrap(), s).unwrap();
            assert!((t.epsilon - (n as f64 - 1.0) / n as f64).abs() < 1e-9);
        }
        let h = ellipticity_constant(&catalog(OperatorName::Hodge, 4, 1, None).unwrap(), s).unwrap();
        assert!((h.epsilon - 0.25).abs() < 1e-9);
    }

    #[test]
    fn non_invariant_symbol_uses_sampling() {
        let op = first_coordinate_symbol(3, 2);
        let r = ellipticity_constant(&op, Sampling { coarse_count: 64, refine_steps: 30 }).unwrap();
        assert!(!r.invariant);
        assert!(r.epsilon < 1e-6, "{}", r.epsilon);
        assert!(r.argmin_xi[0].abs() < 1e-3);
    }

    #[test]
    fn refinement_never_increases() {
        let op = first_coordinate_symbol(4, 1);
        let mut last = f64::INFINITY;
        for steps in [0, 1, 2, 5, 10] {
            let (v, _) =
                sampled_minimum(&op, Sampling { coarse_count: 16, refine_steps: steps }, Execution::Sequential);
            assert!(v <= last);
            last = v;
        }
        let mut last = f64::INFINITY;
        for count in [4, 8, 16, 64, 256] {
            let (v, _) = sampled_minimum(&op, Sampling { coarse_count: count, refine_steps: 0 }, Execution::Sequential);
            assert!(v <= last);
            last = v;
        }
    }
}
