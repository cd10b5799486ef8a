//! Seeded randomness shared by the sampled oracles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0xD15C;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// The sampling seed, overridable through `WITTFORGE_SEED` (decimal or `0x` hex).
pub fn seed_from_env() -> u64 {
    std::env::var("WITTFORGE_SEED").ok().and_then(|s| parse_seed(&s)).unwrap_or(DEFAULT_SEED)
}

pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16).ok(),
        None => s.parse().ok(),
    }
}

/// An independent stream per label, so checks do not perturb each other.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    // FNV-1a over the label mixes it into the seed deterministically.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}
