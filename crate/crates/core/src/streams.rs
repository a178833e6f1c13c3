//! Counter-based random streams.
//!
//! A stream is identified by `(seed, tag, index)`. The seed and tag pick a
//! ChaCha key, the index picks one of its 2^64 streams, so replication `i`
//! draws the same numbers no matter which worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Stream number `index` under key `(seed, tag)`.
pub fn stream(seed: u64, tag: &str, index: u64) -> Stream {
    let mut state = seed ^ fnv1a(tag).rotate_left(17);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// A 64-bit seed for nested stream families, e.g. per-path sub-streams.
pub fn derive_seed(seed: u64, tag: &str, index: u64) -> u64 {
    let mut state = seed ^ fnv1a(tag) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93);
    splitmix64(&mut state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream(7, "x", 3).random();
        let b: u64 = stream(7, "x", 3).random();
        let c: u64 = stream(7, "x", 4).random();
        let d: u64 = stream(7, "y", 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert_ne!(derive_seed(1, "t", 0), derive_seed(1, "t", 1));
    }
}
