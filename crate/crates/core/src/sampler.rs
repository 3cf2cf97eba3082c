//! Seeded sampling of Linial-Meshulam random complexes.
//!
//! A sample on `n` vertices with dimension `d` contains the full
//! (d-1)-skeleton plus each candidate d-simplex independently with
//! probability `p`. Candidates are visited in colexicographic order
//! (increasing bitmask value), one uniform variate per candidate, included
//! iff the variate is below `p`; for a fixed seed this makes samples a
//! monotone coupling in `p`, and makes a sample on fewer vertices the
//! restriction of the sample on more.
//!
//! Reproducibility is part of the contract, so the generator is pinned
//! here rather than borrowed from a library: SplitMix64 (Steele-Lea-Flood
//! weyl-sequence generator, increment 0x9E3779B97F4A7C15 with the standard
//! two-round finalizer), with per-trial substreams derived by
//! [`substream_seed`]. Identical `(params, trial)` gives a bit-identical
//! complex on every platform and with any number of worker threads.

use thiserror::Error;

use crate::complex::{SimplicialComplex, MAX_VERTICES};
use crate::subsets::k_subsets;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("vertex count must be in 1..={MAX_VERTICES}, got {0}")]
    BadVertexCount(usize),
    #[error("dimension d must satisfy 1 <= d <= n-1, got d={d}, n={n}")]
    BadDimension { d: usize, n: usize },
    #[error("inclusion probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
}

/// Parameters of one Linial-Meshulam sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LMParams {
    /// Vertex count, labels `1..=n`.
    pub n: usize,
    /// Dimension of the random simplices; the full (d-1)-skeleton is
    /// always present.
    pub d: usize,
    /// Inclusion probability of each candidate d-simplex.
    pub p: f64,
    /// Master seed.
    pub seed: u64,
}

impl LMParams {
    pub fn validate(&self) -> Result<(), SampleError> {
        if self.n == 0 || self.n > MAX_VERTICES {
            return Err(SampleError::BadVertexCount(self.n));
        }
        if self.d == 0 || self.d > self.n - 1 {
            return Err(SampleError::BadDimension {
                d: self.d,
                n: self.n,
            });
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(SampleError::BadProbability(self.p));
        }
        Ok(())
    }
}

/// SplitMix64: state advances by the golden-gamma Weyl increment, outputs
/// go through the murmur-style finalizer. Small, portable, and fully
/// specified by the constants below.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform variate in `[0, 1)` with 53 random mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `trial`-th substream of `master`.
///
/// `mix64(master + (trial + 1) * GOLDEN_GAMMA)`: one Weyl step per trial
/// index, then the SplitMix64 finalizer. Stable across platforms and
/// independent of which worker executes which trial.
pub fn substream_seed(master: u64, trial: u64) -> u64 {
    mix64(master.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Draws one Linial-Meshulam sample.
pub fn sample_lm(params: &LMParams) -> Result<SimplicialComplex, SampleError> {
    params.validate()?;
    let mut rng = SplitMix64::new(params.seed);
    let mut buckets: Vec<Vec<u64>> = (0..params.d)
        .map(|k| k_subsets(params.n, k + 1).collect())
        .collect();
    let chosen: Vec<u64> = k_subsets(params.n, params.d + 1)
        .filter(|_| rng.next_f64() < params.p)
        .collect();
    buckets.push(chosen);
    Ok(SimplicialComplex::from_closed_buckets(params.n, buckets))
}

/// Draws the `trial`-th sample of the substream family rooted at
/// `params.seed`; equals [`sample_lm`] with the derived seed.
pub fn sample_stream(params: &LMParams, trial: u64) -> Result<SimplicialComplex, SampleError> {
    let derived = LMParams {
        seed: substream_seed(params.seed, trial),
        ..*params
    };
    sample_lm(&derived)
}
