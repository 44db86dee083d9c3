//! Seeded randomness for splitting.
//!
//! All shuffles use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, and draw bounded integers as `u64`, so a
//! given seed yields the same index sets on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SplitRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SplitRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fisher–Yates shuffle.
pub fn shuffle<T>(items: &mut [T], rng: &mut SplitRng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        items.swap(i, j);
    }
}
