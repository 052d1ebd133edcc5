//! Deterministic seed derivation.
//!
//! Every random stream is keyed by a tuple of integers (base seed, grid
//! point, trajectory, channel, component). Keys are hashed with the
//! SplitMix64 finalizer so neighbouring tuples give unrelated streams, and the
//! resulting 256-bit key seeds a ChaCha8 generator.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a sequence of words into one 64-bit seed.
pub fn derive(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x243F_6A88_85A3_08D3, |acc, &w| mix64(acc ^ mix64(w)))
}

/// Seed of trajectory `index` in an ensemble with base seed `base`.
pub fn trajectory_seed(base: u64, index: u64) -> u64 {
    derive(&[base, 0x7472_616a, index])
}

/// Seed of sweep grid point `index`.
pub fn point_seed(base: u64, index: u64) -> u64 {
    derive(&[base, 0x706f_696e, index])
}

/// A ChaCha8 generator for a key tuple; the last word selects the stream so
/// that element `k` of a family never depends on how many others were drawn.
pub fn rng_for(key: &[u64], stream: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    let mut h = derive(key);
    for chunk in seed.chunks_mut(8) {
        h = mix64(h);
        chunk.copy_from_slice(&h.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform double in `[0, 1)` with 53 random bits.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
