//! Seed derivation. A child seed is the first output of ChaCha8 keyed by
//! the parent seed on stream `index`, so any deal can be replayed from the
//! master seed and its index alone.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alphamu_core::Seat;

pub fn derive(parent: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(parent);
    rng.set_stream(index);
    rng.next_u64()
}

/// Seed of deal `index` under `master`.
pub fn deal_seed(master: u64, index: usize) -> u64 {
    derive(master, index as u64)
}

/// Stream for one seat's world sampling within a deal. Depends on the deal
/// seed and the seat only, never on the declarer's engine.
pub fn seat_seed(deal_seed: u64, seat: Seat) -> u64 {
    derive(deal_seed, 1 + seat.index() as u64)
}

/// Seed of the `j`-th filter playout of a deal.
pub fn playout_seed(deal_seed: u64, j: usize) -> u64 {
    derive(derive(deal_seed, 16), j as u64)
}
