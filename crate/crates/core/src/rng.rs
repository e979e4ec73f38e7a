//! Seeded samplers shared by the fuzz harnesses.
//!
//! Batches draw from independent ChaCha streams of the master seed so that
//! results do not depend on how batches are scheduled.

use nalgebra::{Complex, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::{CMatrix, CVector};

pub type LabRng = ChaCha8Rng;

pub fn master_rng(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn batch_rng(seed: u64, batch: u64) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch + 1);
    rng
}

pub fn complex_normal(rng: &mut impl Rng) -> Complex<f64> {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn complex_normal_vector(rng: &mut impl Rng, len: usize) -> CVector {
    CVector::from_fn(len, |_, _| complex_normal(rng))
}

pub fn complex_normal_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn unit_covector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: DVector<f64> = DVector::from_fn(n, |_, _| rng.sample(StandardNormal));
        let norm = v.norm();
        if norm > 1e-8 {
            return (v / norm).iter().copied().collect();
        }
    }
}

/// Coupling constant in `[0, max]`: exact zero 5% of the time, otherwise
/// log-uniform over `[1e-3, max]`.
pub fn coupling(rng: &mut impl Rng, max: f64) -> f64 {
    if rng.random_bool(0.05) {
        return 0.0;
    }
    let lo = 1e-3f64.ln();
    let hi = max.max(1e-3).ln();
    rng.random_range(lo..=hi).exp()
}
