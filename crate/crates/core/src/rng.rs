// Copyright 2026 The parity-loqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Reproducible random streams.
//!
//! Every Monte-Carlo trial draws from its own stream, keyed by the run seed
//! and the trial index. The underlying generator is ChaCha8, which is a
//! counter-based cipher: the key is derived from the seed and the 64-bit
//! stream id selects an independent keystream. Two trials therefore never
//! share random numbers, no matter which worker thread executes them or in
//! which order, and a trial can be replayed in isolation.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// An independent random stream owned by a single trial or caller.
#[derive(Clone, Debug)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    /// Stream number `index` of the family keyed by `seed`.
    pub fn new(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        RngStream { inner }
    }

    /// Stream for Monte-Carlo trial `trial` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(seed, trial)
    }

    /// Derive a child stream, e.g. for a sub-experiment inside a trial.
    ///
    /// The child is keyed by a value drawn from this stream, so it is
    /// reproducible but uncorrelated with the parent's later draws.
    pub fn split(&mut self) -> Self {
        let seed = self.inner.next_u64();
        let index = self.inner.next_u64();
        Self::new(seed, index)
    }

    /// A fair coin: `true` with probability exactly 1/2.
    pub fn coin(&mut self) -> bool {
        self.inner.next_u32() & 1 == 1
    }

    /// Uniform sample in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}
