//! Monte-Carlo estimation of the worst-case angular error.
//!
//! Directions are drawn as normalized standard-normal vectors. Sample `k`
//! comes from a ChaCha8 keystream selected by `(seed, k)` alone, so any
//! partition of the index range across workers sees the same samples, and the
//! max-merge (ties to the lower index) makes the result independent of the
//! worker count.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::bounds::harmonic_number;
use crate::error::{Error, Result};
use crate::geometry::{ScaleSweep, UnitVector};

/// Dimension, sample count and seed of a sampled direction stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub dimension: usize,
    pub count: u64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(dimension: usize, count: u64, seed: u64) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dimension}")));
        }
        if count < 1 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        Ok(Self { dimension, count, seed })
    }
}

/// Sampled worst case of the nearest-codeword angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageEstimate {
    pub alphabet_name: String,
    pub dimension: usize,
    pub sample_count: u64,
    pub seed: u64,
    /// Largest sampled angle, radians. A lower bound on the true covering radius.
    pub max_angle: f64,
    pub argmax_index: u64,
    pub argmax_direction: UnitVector,
    /// `sqrt(H_n) * cos(max_angle)`.
    pub normalized_deficit: f64,
}

impl CoverageEstimate {
    pub fn max_angle_deg(&self) -> f64 {
        crate::to_degrees(self.max_angle)
    }
}

/// Counter-indexed generator of Gaussian-normalized unit vectors.
#[derive(Debug, Clone)]
pub struct DirectionSampler {
    base: ChaCha8Rng,
    dimension: usize,
}

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

impl DirectionSampler {
    pub fn new(seed: u64, dimension: usize) -> Self {
        Self { base: ChaCha8Rng::seed_from_u64(seed), dimension }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Writes sample `index` into `out` (length = dimension).
    ///
    /// Coordinates are Box-Muller pairs from 53-bit uniforms, then normalized.
    pub fn fill(&self, index: u64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dimension);
        let mut rng = self.base.clone();
        rng.set_stream(index);
        loop {
            let mut i = 0;
            while i < out.len() {
                let u1 = 1.0 - (rng.next_u64() >> 11) as f64 * TWO_POW_MINUS_53;
                let u2 = (rng.next_u64() >> 11) as f64 * TWO_POW_MINUS_53;
                let r = (-2.0 * u1.ln()).sqrt();
                let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
                out[i] = r * c;
                if i + 1 < out.len() {
                    out[i + 1] = r * s;
                }
                i += 2;
            }
            let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                out.iter_mut().for_each(|v| *v /= norm);
                return;
            }
        }
    }

    pub fn sample(&self, index: u64) -> UnitVector {
        let mut v = vec![0.0; self.dimension];
        self.fill(index, &mut v);
        UnitVector::new(v).expect("sampler produces unit vectors")
    }
}

/// The direction stream described by `spec`, in index order.
pub fn sample_unit_vectors(spec: SampleSpec) -> impl Iterator<Item = UnitVector> {
    let sampler = DirectionSampler::new(spec.seed, spec.dimension);
    (0..spec.count).map(move |k| sampler.sample(k))
}

/// Keeps the larger angle; equal angles keep the lower sample index.
fn max_merge(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

const MIN_CHUNK: usize = 256;

fn worst_over_stream(sweep: &ScaleSweep, sampler: &DirectionSampler, count: u64) -> (f64, u64) {
    let n = sampler.dimension();
    (0..count as usize)
        .into_par_iter()
        .with_min_len(MIN_CHUNK)
        .map_init(
            || (sweep.clone(), vec![0.0; n]),
            |(sw, buf), k| {
                let k = k as u64;
                sampler.fill(k, buf);
                (sw.min_angle(buf), k)
            },
        )
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), max_merge)
}

fn build_estimate(a: &Alphabet, spec: SampleSpec, sampler: &DirectionSampler, best: (f64, u64)) -> CoverageEstimate {
    let (max_angle, argmax_index) = best;
    CoverageEstimate {
        alphabet_name: a.name().to_string(),
        dimension: spec.dimension,
        sample_count: spec.count,
        seed: spec.seed,
        max_angle,
        argmax_index,
        argmax_direction: sampler.sample(argmax_index),
        normalized_deficit: harmonic_number(spec.dimension as u64).sqrt() * max_angle.cos(),
    }
}

/// Largest nearest-codeword angle over the sampled directions.
///
/// Requires a mixed-sign alphabet.
pub fn estimate_worst_case(a: &Alphabet, spec: SampleSpec) -> Result<CoverageEstimate> {
    let spec = SampleSpec::new(spec.dimension, spec.count, spec.seed)?;
    let sweep = ScaleSweep::new(a)?;
    let sampler = DirectionSampler::new(spec.seed, spec.dimension);
    let best = worst_over_stream(&sweep, &sampler, spec.count);
    Ok(build_estimate(a, spec, &sampler, best))
}

/// Per-sample nearest-codeword angles, in sample order.
pub fn sample_angles(a: &Alphabet, spec: SampleSpec) -> Result<Vec<f64>> {
    let spec = SampleSpec::new(spec.dimension, spec.count, spec.seed)?;
    let sweep = ScaleSweep::new(a)?;
    let sampler = DirectionSampler::new(spec.seed, spec.dimension);
    let n = spec.dimension;
    Ok((0..spec.count as usize)
        .into_par_iter()
        .with_min_len(MIN_CHUNK)
        .map_init(
            || (sweep.clone(), vec![0.0; n]),
            |(sw, buf), k| {
                sampler.fill(k as u64, buf);
                sw.min_angle(buf)
            },
        )
        .collect())
}

/// Estimates for two alphabets on the identical sample stream.
pub fn estimate_pair_equivalence(
    a: &Alphabet,
    b: &Alphabet,
    spec: SampleSpec,
) -> Result<(CoverageEstimate, CoverageEstimate)> {
    Ok((estimate_worst_case(a, spec)?, estimate_worst_case(b, spec)?))
}

/// A frozen, materialized sample set for repeated objective evaluations.
#[derive(Debug, Clone)]
pub struct EvalSet {
    spec: SampleSpec,
    coords: Vec<f64>,
}

impl EvalSet {
    pub fn generate(spec: SampleSpec) -> Result<Self> {
        let spec = SampleSpec::new(spec.dimension, spec.count, spec.seed)?;
        let sampler = DirectionSampler::new(spec.seed, spec.dimension);
        let n = spec.dimension;
        let mut coords = vec![0.0; n * spec.count as usize];
        coords
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(k, row)| sampler.fill(k as u64, row));
        Ok(Self { spec, coords })
    }

    pub fn spec(&self) -> SampleSpec {
        self.spec
    }

    /// Worst-case angle of `a` over this set, radians.
    pub fn worst_angle(&self, a: &Alphabet) -> Result<f64> {
        let sweep = ScaleSweep::new(a)?;
        let n = self.spec.dimension;
        let (angle, _) = self
            .coords
            .par_chunks(n)
            .with_min_len(MIN_CHUNK)
            .enumerate()
            .map_init(|| sweep.clone(), |sw, (k, u)| (sw.min_angle(u), k as u64))
            .reduce(|| (f64::NEG_INFINITY, u64::MAX), max_merge);
        Ok(angle)
    }
}
