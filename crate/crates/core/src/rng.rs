//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit [`RandomStream`]. Parallel
//! replications use [`RandomStream::derive`], which selects an independent
//! ChaCha stream from `(seed, index)`, so results never depend on the
//! order in which replications execute.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct RandomStream(ChaCha8Rng);

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent stream number `index` of the family identified by `seed`.
    ///
    /// Stream 0 is reserved for [`RandomStream::new`].
    pub fn derive(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index.wrapping_add(1));
        Self(rng)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    /// Uniform draw on `[lo, hi)`; returns `lo` when the range is empty.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if hi > lo {
            self.0.random_range(lo..hi)
        } else {
            lo
        }
    }

    pub fn coin(&mut self) -> bool {
        self.0.next_u32() & 1 == 1
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}
