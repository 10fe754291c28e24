//! Seeded, stream-indexed random source.
//!
//! Every random object in the library is drawn from a [`RngStream`]: a
//! ChaCha8 counter-mode generator keyed by a 64-bit seed and positioned on
//! one of 2^64 independent streams. Identical `(seed, stream)` pairs
//! reproduce the identical draw sequence on any host and under any thread
//! schedule, which is what makes replicate-per-stream parallelism
//! deterministic.
//!
//! Key schedule: the 256-bit ChaCha key is the first four outputs of a
//! SplitMix64 sequence started at the seed (little-endian words); the
//! stream id is the ChaCha nonce. `uniform()` maps the top 53 bits of a
//! `u64` draw to the open-closed interval `(0, 1]` via
//! `((x >> 11) + 1) · 2^-53`, so `ln(u)` is always finite.

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

const SPLITMIX_GAMMA: u64 = 0x9E3779B97F4A7C15;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(SPLITMIX_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Expand a 64-bit seed into the 256-bit ChaCha key.
fn expand_seed(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Deterministic random stream; see the module docs for the exact layout.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(expand_seed(seed));
        rng.set_stream(stream);
        RngStream { rng, seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw on `(0, 1]` with 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }
}
