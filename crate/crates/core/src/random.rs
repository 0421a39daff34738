//! Seeded random inputs for verification suites. ChaCha8 keeps draws
//! reproducible across platforms.

use crate::linalg::{Operator, StateVector};
use crate::scalar::{Real, C};
use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent per-trial stream derived from a base seed.
pub fn rng_for_trial(seed: u64, trial: u64) -> ChaCha8Rng {
    rng_from_seed(seed ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn random_complex<R: Real>(rng: &mut impl Rng) -> C<R> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(R::of(re), R::of(im))
}

/// Square matrix with independent complex Gaussian entries.
pub fn random_ginibre<R: Real>(rng: &mut impl Rng, d: usize) -> Operator<R> {
    let mut data = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        data.push(random_complex::<R>(rng));
    }
    Operator::new(data, vec![d])
}

/// GUE-style Hermitian matrix `(G + G^dagger)/2`.
pub fn random_hermitian<R: Real>(rng: &mut impl Rng, d: usize) -> Operator<R> {
    let g = random_ginibre::<R>(rng, d);
    g.add(&g.adjoint()).scale(Complex::new(R::of(0.5), R::zero()))
}

/// Haar-ish random unit vector (Gaussian components, normalized).
pub fn random_unit_state<R: Real>(rng: &mut impl Rng, d: usize) -> StateVector<R> {
    let mut data = Vec::with_capacity(d);
    for _ in 0..d {
        data.push(random_complex::<R>(rng));
    }
    StateVector::new(data, vec![d]).normalized()
}

/// Uniform real in [lo, hi).
pub fn random_range<R: Real>(rng: &mut impl Rng, lo: f64, hi: f64) -> R {
    R::of(rng.gen_range(lo..hi))
}
