//! Fiber-valued trigonometric polynomials on the flat torus `R^n / 2πZ^n`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{complex_normal_vector, LabRng};
use crate::symbols::OperatorSpec;
use crate::tensor::{CVector, LinearMap, Space, C64};

/// `cos(m·x) a + sin(m·x) b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mode {
    pub freq: Vec<i32>,
    pub cos: CVector,
    pub sin: CVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigField {
    torus_dim: usize,
    fiber: Space,
    max_freq: i32,
    modes: Vec<Mode>,
}

fn phase(freq: &[i32], x: &[f64]) -> f64 {
    freq.iter().zip(x).map(|(&m, &t)| m as f64 * t).sum()
}

impl TrigField {
    pub fn new(torus_dim: usize, fiber: Space, max_freq: i32, modes: Vec<Mode>) -> Result<Self> {
        for m in &modes {
            if m.freq.len() != torus_dim || m.cos.len() != fiber.dim() || m.sin.len() != fiber.dim() {
                return Err(Error::ShapeMismatch("mode does not match torus dimension or fiber".into()));
            }
            if m.freq.iter().any(|f| f.abs() > max_freq) {
                return Err(Error::ShapeMismatch(format!("frequency {:?} exceeds bound {max_freq}", m.freq)));
            }
        }
        Ok(Self { torus_dim, fiber, max_freq, modes })
    }

    pub fn constant(torus_dim: usize, fiber: Space, value: CVector) -> Result<Self> {
        let zero = CVector::zeros(fiber.dim());
        Self::new(torus_dim, fiber, 0, vec![Mode { freq: vec![0; torus_dim], cos: value, sin: zero }])
    }

    /// `mode_count` modes with frequencies uniform in `[-max_freq, max_freq]^n`
    /// and standard complex normal coefficients.
    pub fn random(rng: &mut LabRng, torus_dim: usize, fiber: Space, mode_count: usize, max_freq: i32) -> Self {
        let d = fiber.dim();
        let modes = (0..mode_count)
            .map(|_| Mode {
                freq: (0..torus_dim).map(|_| rng.random_range(-max_freq..=max_freq)).collect(),
                cos: complex_normal_vector(rng, d),
                sin: complex_normal_vector(rng, d),
            })
            .collect();
        Self { torus_dim, fiber, max_freq, modes }
    }

    pub fn torus_dim(&self) -> usize {
        self.torus_dim
    }

    pub fn fiber(&self) -> &Space {
        &self.fiber
    }

    pub fn max_freq(&self) -> i32 {
        self.max_freq
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn eval(&self, x: &[f64]) -> CVector {
        let mut out = CVector::zeros(self.fiber.dim());
        for m in &self.modes {
            let (s, c) = phase(&m.freq, x).sin_cos();
            out += &m.cos * C64::new(c, 0.0) + &m.sin * C64::new(s, 0.0);
        }
        out
    }

    /// Value and gradient at `x`; the gradient is laid out `(j, f)` in `V* ⊗ fiber`.
    pub fn jet(&self, x: &[f64]) -> (CVector, CVector) {
        let d = self.fiber.dim();
        let mut value = CVector::zeros(d);
        let mut grad = CVector::zeros(self.torus_dim * d);
        for m in &self.modes {
            let (s, c) = phase(&m.freq, x).sin_cos();
            value += &m.cos * C64::new(c, 0.0) + &m.sin * C64::new(s, 0.0);
            let slope = &m.sin * C64::new(c, 0.0) - &m.cos * C64::new(s, 0.0);
            for (j, &mj) in m.freq.iter().enumerate() {
                if mj != 0 {
                    let mut block = grad.rows_mut(j * d, d);
                    block += &slope * C64::new(mj as f64, 0.0);
                }
            }
        }
        (value, grad)
    }

    /// Exact covariant derivative for the flat connection: a field in `V* ⊗ fiber`.
    pub fn nabla(&self) -> TrigField {
        let d = self.fiber.dim();
        let n = self.torus_dim;
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let mut cos = CVector::zeros(n * d);
                let mut sin = CVector::zeros(n * d);
                for (j, &mj) in m.freq.iter().enumerate() {
                    let s = C64::new(mj as f64, 0.0);
                    cos.rows_mut(j * d, d).copy_from(&(&m.sin * s));
                    sin.rows_mut(j * d, d).copy_from(&(&m.cos * -s));
                }
                Mode { freq: m.freq.clone(), cos, sin }
            })
            .collect();
        let fiber = Space::tensor(&[Space::dual(n), self.fiber.clone()]);
        TrigField { torus_dim: n, fiber, max_freq: self.max_freq, modes }
    }

    /// Apply a constant fiber map to every coefficient.
    pub fn map(&self, l: &LinearMap) -> Result<TrigField> {
        if l.domain() != &self.fiber {
            return Err(Error::FiberMismatch);
        }
        let m = l.entries();
        let modes = self
            .modes
            .iter()
            .map(|mode| Mode { freq: mode.freq.clone(), cos: m * &mode.cos, sin: m * &mode.sin })
            .collect();
        Ok(TrigField { torus_dim: self.torus_dim, fiber: l.codomain().clone(), max_freq: self.max_freq, modes })
    }

    pub fn add(&self, other: &TrigField) -> Result<TrigField> {
        if other.fiber != self.fiber || other.torus_dim != self.torus_dim {
            return Err(Error::FiberMismatch);
        }
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        Ok(TrigField {
            torus_dim: self.torus_dim,
            fiber: self.fiber.clone(),
            max_freq: self.max_freq.max(other.max_freq),
            modes,
        })
    }

    pub fn scale(&self, s: f64) -> TrigField {
        let s = C64::new(s, 0.0);
        let mut out = self.clone();
        for m in &mut out.modes {
            m.cos *= s;
            m.sin *= s;
        }
        out
    }

    /// `√Σ (|a_m|² + |b_m|²)` over the stored modes.
    pub fn coefficient_norm(&self) -> f64 {
        self.modes.iter().map(|m| m.cos.norm_squared() + m.sin.norm_squared()).sum::<f64>().sqrt()
    }

    /// Relabel the fiber without touching coefficients.
    pub fn relabel(&self, fiber: Space) -> Result<TrigField> {
        if fiber.dim() != self.fiber.dim() {
            return Err(Error::FiberMismatch);
        }
        Ok(TrigField { fiber, ..self.clone() })
    }
}

/// `D f = σ(D) ∘ ∇ f`, realized at coefficient level.
pub fn apply_operator(op: &OperatorSpec, f: &TrigField) -> Result<TrigField> {
    if &op.fiber != f.fiber() || op.n != f.torus_dim() {
        return Err(Error::FiberMismatch);
    }
    f.nabla().map(&op.full_symbol)
}

/// `d|φ|` at `x`: the covector `ξ ↦ Re⟨∇_ξ φ, φ⟩ / |φ|`.
pub fn grad_norm_at(f: &TrigField, x: &[f64]) -> Result<Vec<f64>> {
    let (value, grad) = f.jet(x);
    let norm = value.norm();
    if norm <= 1e-12 {
        return Err(Error::ZeroSection);
    }
    let d = value.len();
    Ok((0..f.torus_dim()).map(|j| (0..d).map(|e| (value[e].conj() * grad[j * d + e]).re).sum::<f64>() / norm).collect())
}
