//! Deterministic, stream-splittable Gaussian randomness.
//!
//! Every randomized routine takes an [`RngSpec`]. A spec maps to a ChaCha8
//! key (the seed) and a ChaCha stream (the stream id), so two specs that
//! differ only in stream id give independent sequences, and the output of a
//! replicate never depends on which worker ran it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Seed plus stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, 0)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Spec for the `index`-th child of this one (replicates, sub-tasks).
    ///
    /// Children of distinct parents use distinct keys; children of the same
    /// parent share a key and differ in stream.
    pub fn child(&self, index: u64) -> RngSpec {
        RngSpec {
            seed: splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(0x5851_f42d_4c95_7f2d))),
            stream_id: index,
        }
    }

    pub fn gaussians(&self) -> GaussianStream {
        GaussianStream { rng: self.rng() }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Infinite iterator of standard normal draws.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: ChaCha8Rng,
}

impl GaussianStream {
    pub fn fill(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.rng.sample(StandardNormal);
        }
    }

    pub fn take_vec(&mut self, count: usize) -> Vec<f64> {
        let mut out = vec![0.0; count];
        self.fill(&mut out);
        out
    }

    /// Uniform draw on `[0, 1)` from the same underlying stream.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl Iterator for GaussianStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.rng.sample(StandardNormal))
    }
}

/// `count` standard normal draws for `spec`.
pub fn gaussian_stream(spec: RngSpec, count: usize) -> Vec<f64> {
    spec.gaussians().take_vec(count)
}
