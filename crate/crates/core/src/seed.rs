//! Deterministic per-replica random streams.
//!
//! A ChaCha8 key is derived from the master seed and a sampler-specific
//! stream tag with SplitMix64; the replica index selects the ChaCha stream.
//! Identical `(master_seed, replica_index)` pairs therefore reproduce
//! bit-identical realisations regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub replica_index: u64,
}

/// Independent random streams used by the samplers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Poisson = 1,
    Marks = 2,
    Thinning = 3,
    Renewal = 4,
    BetaBulk = 5,
    Ginibre = 6,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeedSpec {
    pub fn new(master_seed: u64, replica_index: u64) -> Self {
        SeedSpec {
            master_seed,
            replica_index,
        }
    }

    /// The same master seed with another replica index.
    pub fn replica(&self, replica_index: u64) -> Self {
        SeedSpec { replica_index, ..*self }
    }

    pub fn rng(&self, stream: Stream) -> ChaCha8Rng {
        let mut state = self.master_seed ^ (stream as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.replica_index);
        rng
    }
}
