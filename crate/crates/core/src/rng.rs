//! Seed derivation. Every random draw in the crate comes from a ChaCha8
//! generator keyed by an explicit seed and a purpose stream, so two
//! consumers sharing a seed never share a sequence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Stream {
    Split,
    Relieff,
    Permutation,
    Synthetic(u64),
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Split => 0,
            Stream::Relieff => 1,
            Stream::Permutation => 2,
            Stream::Synthetic(k) => 16 + k,
        }
    }
}

pub(crate) fn seeded(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}

/// Offset separating permutation seeds from cycle and fold seeds, which are
/// `seed + index`.
pub(crate) const PERMUTATION_SEED_OFFSET: u64 = 1 << 32;
