//! Fixtures shared by the benchmarks.

use circlecolor::instances::{instance_seeds, random_instance};
use circlecolor::IntervalRepresentation;

/// Fixed seed so every run measures the same instances.
pub const SEED: u64 = 2024;

/// `count` random instances with `n` vertices.
pub fn instances(n: usize, count: usize) -> Vec<IntervalRepresentation> {
    instance_seeds(SEED, count).into_iter().map(|s| random_instance(n, s)).collect()
}

/// Weights in `-5..=5` that vary with the vertex index.
pub fn weights(n: usize) -> Vec<f64> {
    (0..n).map(|v| ((v * 7 + 3) % 11) as f64 - 5.0).collect()
}
