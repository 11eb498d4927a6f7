//! Shared inputs for the benchmarks.

use dircov_core::estimate::DirectionSampler;
use dircov_core::{Alphabet, UnitVector};

/// The three 4-bit floating-point formats and 4-bit two's complement.
pub fn four_bit_formats() -> Vec<Alphabet> {
    ["e2m1", "e1m2", "e3m0", "int4"]
        .iter()
        .map(|f| Alphabet::from_format(f).expect("known format"))
        .collect()
}

/// `count` deterministic directions in dimension `n`.
pub fn directions(n: usize, count: u64, seed: u64) -> Vec<UnitVector> {
    let sampler = DirectionSampler::new(seed, n);
    (0..count).map(|k| sampler.sample(k)).collect()
}
