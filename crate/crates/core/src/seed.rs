//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from a [`Seed`]: a 64-bit
//! master seed plus a 64-bit stream index. The generator is ChaCha8 keyed by
//! the master seed with the stream index selecting one of its 2^64
//! independent streams, so distinct indices never share output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Name and version of the generator, recorded in every output's metadata.
pub const RNG_NAME: &str = "ChaCha8Rng(rand_chacha-0.9;seed_from_u64;set_stream)+f64:StandardUniform(rand-0.9)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream_index: u64,
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed {
            master,
            stream_index: 0,
        }
    }

    /// Same master seed, different stream.
    pub fn stream(self, index: u64) -> Self {
        Seed {
            master: self.master,
            stream_index: index,
        }
    }

    /// A fresh master seed derived from this seed and `label`, for nesting
    /// an independent family of streams (e.g. one per bisection level).
    pub fn fork(self, label: u64) -> Self {
        let mut x = splitmix64(self.master ^ splitmix64(self.stream_index));
        x = splitmix64(x ^ splitmix64(label.wrapping_add(0x6a09_e667_f3bc_c909)));
        Seed::new(x)
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream_index);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
