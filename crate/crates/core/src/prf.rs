//! Counter-based pseudorandom functions.
//!
//! Procedural colorings must be random-access: the color of edge `(a, b)` is a
//! pure function of `(seed, a, b)`, independent of query order and thread
//! count. The mixer is the SplitMix64 finalizer (Steele, Lea and Flood), applied
//! once per absorbed word.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Keyed hash of a word sequence: each word is added to the state together
/// with a golden-ratio increment and the state is re-mixed.
#[inline]
pub fn prf(seed: u64, words: &[u64]) -> u64 {
    let mut state = mix64(seed.wrapping_add(GOLDEN));
    for &w in words {
        state = mix64(state.wrapping_add(GOLDEN) ^ w);
    }
    state
}

/// Edge PRF: `prf(seed, [a, b])`.
#[inline]
pub fn edge(seed: u64, a: usize, b: usize) -> u64 {
    prf(seed, &[a as u64, b as u64])
}

/// Derives an independent child seed, e.g. one per Monte-Carlo trial or per
/// sampling attempt. The `domain` tag separates unrelated uses of the same
/// master seed.
#[inline]
pub fn split(seed: u64, domain: u64, index: u64) -> u64 {
    prf(seed, &[0x5eed_0000_0000_0000 ^ domain, index])
}
