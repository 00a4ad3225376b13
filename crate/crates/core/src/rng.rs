//! Counter-based random streams.
//!
//! Every Monte Carlo quantity in the crate draws from a substream addressed
//! by `(seed, channel, index)`. The substream for sample `i` does not depend
//! on how many samples were drawn before it, so results are identical for
//! any number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedStream {
    seed: u64,
    channel: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream { seed, channel: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A stream with the same seed but an independent channel. Used to keep
    /// e.g. block selection and evaluation samples apart.
    pub fn channel(&self, channel: u64) -> Self {
        SeedStream {
            seed: self.seed,
            channel: splitmix(self.channel ^ splitmix(channel.wrapping_add(1))),
        }
    }

    /// The generator for sample `index`.
    pub fn substream(&self, index: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.channel.to_le_bytes());
        key[16..24].copy_from_slice(&splitmix(self.seed).to_le_bytes());
        key[24..].copy_from_slice(&splitmix(self.channel ^ 0x5bd1_e995).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        rng
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
