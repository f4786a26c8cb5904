//! Deterministic random stream derivation.
//!
//! Every stochastic routine in this crate draws from a ChaCha12 stream whose
//! seed is derived from a list of u64 key parts (run seed, context
//! fingerprint, a domain constant, stream index). Streams are therefore
//! independent of evaluation order and thread count: parallel and sequential
//! runs produce identical output.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub(crate) const DOMAIN_SAMPLE: u64 = 0x5341_4d50;
pub(crate) const DOMAIN_BOOTSTRAP: u64 = 0x424f_4f54;
pub(crate) const DOMAIN_RESAMPLE: u64 = 0x5245_5341;
pub(crate) const DOMAIN_SPLIT: u64 = 0x53_504c;
pub(crate) const DOMAIN_PERMUTE: u64 = 0x5045_524d;

pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds key parts into a single well-mixed u64.
pub(crate) fn mix(parts: &[u64]) -> u64 {
    let mut h = splitmix64(parts.len() as u64);
    for &p in parts {
        h = splitmix64(h ^ p);
    }
    h
}

/// FNV-1a over raw bytes, finished with one splitmix round.
pub(crate) fn hash_bytes(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    splitmix64(h)
}

/// ChaCha12 stream keyed by the given parts.
pub(crate) fn stream_rng(parts: &[u64]) -> ChaCha12Rng {
    let mut h = mix(parts);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        h = splitmix64(h);
        chunk.copy_from_slice(&h.to_le_bytes());
    }
    ChaCha12Rng::from_seed(seed)
}
