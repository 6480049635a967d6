//! Counter-based per-sample random streams.
//!
//! Sample `i` of a run seeded with `seed` always reads ChaCha8 stream `i` under
//! the key derived from `seed`, whichever worker happens to process it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SampleStreams {
    base: ChaCha8Rng,
}

impl SampleStreams {
    pub fn new(seed: u64) -> Self {
        SampleStreams {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng
    }
}

/// Seed for an independent sub-run (e.g. one bisection step).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Bernoulli threshold on 32-bit draws: an edge is open iff `next_u32() < t`.
/// Increasing in `p`, so runs at different `p` on the same stream are coupled.
pub fn open_threshold(p: f64) -> u64 {
    (p.clamp(0.0, 1.0) * 4_294_967_296.0).round() as u64
}

#[inline]
pub fn bernoulli(rng: &mut impl RngCore, threshold: u64) -> bool {
    (rng.next_u32() as u64) < threshold
}

/// Uniform on the open interval (0, 1).
pub fn uniform_open(rng: &mut impl RngCore) -> f64 {
    loop {
        let x = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        if x > 0.0 {
            return x;
        }
    }
}
