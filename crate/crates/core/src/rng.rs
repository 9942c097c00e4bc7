//! Seeded per-shot random streams.
//!
//! Every shot gets its own ChaCha8 stream keyed by `(master_seed, shot_index)`,
//! so a shot's draws do not depend on which worker ran it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type ShotRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotStreams {
    master_seed: u64,
}

impl ShotStreams {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Generator for one shot. The ChaCha stream number is the shot index.
    pub fn stream(&self, shot_index: u64) -> ShotRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(shot_index);
        rng
    }
}

/// Uniform draw in `[0, 1)`.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}
