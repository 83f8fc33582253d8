//! Deterministic seed derivation.
//!
//! Every random decision in the crate draws from a ChaCha stream whose seed is
//! derived from one master seed plus a path of integer tags. Derived seeds are
//! stable across platforms and independent of thread scheduling, which is what
//! makes reports byte-identical regardless of worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags for child seed derivation. Values are arbitrary but fixed.
pub mod tags {
    pub const FEATURES: u64 = 0x5ee1;
    pub const COMMUNITY: u64 = 0xc0de;
    pub const FOLD_SHUFFLE: u64 = 0xf01d;
    pub const TRAIN: u64 = 0x7a11;
    pub const TREE: u64 = 0x7ee5;
    pub const MODEL_GRAPH: u64 = 0x9e4e;
    pub const SAMPLE: u64 = 0x5a3b;
    pub const ATTACH: u64 = 0xa77c;
    pub const TWIN: u64 = 0x791;
    pub const BOOTSTRAP: u64 = 0xb005;
}

#[inline]
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive a child seed from a master seed and a tag path.
///
/// `derive(s, &[a, b])` differs from `derive(s, &[b, a])`; the fold is
/// order-sensitive by construction.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &part in path {
        state = splitmix64(state ^ splitmix64(part));
    }
    state
}

/// A ChaCha RNG seeded from a derived seed.
pub fn rng(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_is_stable() {
        // Frozen values: a change here means every seeded experiment changes.
        assert_eq!(derive(0, &[]), 16294208416658607535);
        assert_eq!(derive(42, &[tags::TREE, 7]), derive(42, &[tags::TREE, 7]));
        assert_ne!(derive(42, &[1, 2]), derive(42, &[2, 1]));
        assert_ne!(derive(42, &[1]), derive(43, &[1]));
    }
}
