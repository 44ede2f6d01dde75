//! Seeded generators. Every random draw in the crate goes through here.
//!
//! One user seed feeds several independent ChaCha streams so that, for
//! example, the split and the weight initialisation never consume each
//! other's numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Split = 0,
    Init = 1,
}

pub fn seeded(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
