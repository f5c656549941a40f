//! Deterministic random streams.
//!
//! Every stochastic operation receives an explicit [`RngStream`]; there is no
//! global generator. Streams are ChaCha8 keyed by a 64-bit seed, and per-run
//! streams are separated by ChaCha's stream word, so `(seed, run)` pairs never
//! share a sequence.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::for_run(seed, 0)
    }

    /// Stream for run `run` of a suite driven by master seed `seed`.
    pub fn for_run(seed: u64, run: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(run);
        Self {
            seed,
            stream: run,
            inner,
        }
    }

    /// Derive an independent child stream, e.g. for a worker partition.
    ///
    /// Children are keyed off values drawn from this stream, so the parent's
    /// sequence advances by one word.
    pub fn fork(&mut self) -> Self {
        let seed = self.inner.next_u64();
        Self::for_run(seed, 0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn coin(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.uniform() < p
        }
    }

    /// Uniform index in `[0, n)`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
