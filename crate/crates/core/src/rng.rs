//! Seeded random streams.
//!
//! Every stochastic routine draws from ChaCha8 (the 8-round ChaCha stream
//! cipher used as a counter-based generator). A `u64` seed is expanded into
//! the 256-bit key with `rand_core`'s `seed_from_u64` (PCG32 fill), and
//! independent consumers (annealing reads, measurement shots) select a
//! distinct 64-bit stream id on the same key. Uniform `f64` draws are
//! `(next_u64 >> 11) * 2^-53`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream 0 of `seed`.
pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for stream `index` of `seed`; streams never overlap.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw in `[0, 1)`.
#[inline]
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}

/// Mixes a base seed with a salt into a new seed (SplitMix64 finalizer).
pub fn derive_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
