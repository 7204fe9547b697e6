//! Seeded random streams.
//!
//! Every stream is ChaCha20 (20 rounds, as implemented by `rand_chacha`)
//! keyed with the master seed in little-endian order in key bytes 0..8 and
//! zeros elsewhere. The 64-bit stream id is `(trial << 8) | role`. Draws are
//! counter-based, so a trial's stream does not depend on which other trials
//! ran before it.
//!
//! Uniform reals take the top 53 bits of one `next_u64` word:
//! `u = (word >> 11) · 2⁻⁵³`, then `lo + (hi − lo)·u`.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Stream role for the reference tensor of a trial.
pub const ROLE_REFERENCE: u8 = 0;
/// Stream role for everything that builds the alternate tensor.
pub const ROLE_ALTERNATE: u8 = 1;

pub type Stream = ChaCha20Rng;

pub fn stream(master_seed: u64, trial: u64, role: u8) -> Stream {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream((trial << 8) | role as u64);
    rng
}

/// Uniform draw on `[0, 1)`.
pub fn unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw on `[lo, hi)`.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}
