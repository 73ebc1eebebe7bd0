//! Shared inputs for the benchmarks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` seeded points with modulus at most `radius`.
pub fn points(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Complex64::from_polar(radius * rng.random::<f64>().sqrt(), rng.random_range(-PI..PI))).collect()
}
