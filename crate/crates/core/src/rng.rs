//! Counter-based random streams.
//!
//! Every random quantity is drawn from a ChaCha stream keyed by
//! `(master seed, replication index, purpose)`, so a replication's draws do
//! not depend on how replications are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Signal = 1,
    Noise = 2,
    Mixing = 3,
    Resampling = 4,
}

pub fn stream_rng(master: u64, index: u64, stream: Stream) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master.to_le_bytes());
    seed[8..16].copy_from_slice(&index.to_le_bytes());
    seed[16..24].copy_from_slice(&(stream as u64).to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}
