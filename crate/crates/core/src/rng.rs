//! Deterministic per-sample random streams.
//!
//! Every Monte-Carlo sample draws from a ChaCha8 stream keyed by the master
//! seed and selected by the sample id, so a sample's randomness does not
//! depend on which worker runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

pub fn sample_rng(master_seed: u64, sample_id: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(sample_id);
    rng
}
