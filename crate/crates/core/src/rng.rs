//! Seeded randomness.
//!
//! Every random decision in the crate goes through [`RandomSource`], whose
//! only primitive beyond raw 64-bit output is [`RandomSource::uniform_below`].
//! The default generator is ChaCha8 (value-stable across `rand_chacha`
//! releases) and integer sampling is done here rather than delegated, so a
//! seed produces the same run on every platform and toolchain.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A deterministic stream of random integers.
pub trait RandomSource {
    fn next_u64(&mut self) -> u64;

    /// Uniform integer in `[0, r)`. Panics if `r == 0`.
    fn uniform_below(&mut self, r: usize) -> usize {
        assert!(r > 0, "uniform_below requires a positive bound");
        if r == 1 {
            return 0;
        }
        let r = r as u64;
        // Rejection sampling on the largest multiple of r below 2^64.
        let zone = u64::MAX - (u64::MAX - r + 1) % r;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return (x % r) as usize;
            }
        }
    }
}

/// ChaCha8 generator seeded from a single `u64`.
#[derive(Clone, Debug)]
pub struct SeededRng {
    inner: ChaCha8Rng,
    seed: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RandomSource for SeededRng {
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `stream` of repetition `index` under `master`.
///
/// `splitmix64(splitmix64(master ^ splitmix64(index)) ^ stream)`; stream 0
/// drives the arrival order and stream 1 the colouring choices.
pub fn derive_seed(master: u64, index: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(index)) ^ stream)
}
