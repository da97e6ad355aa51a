//! Reproducible random streams.
//!
//! Every random draw in a simulation comes from a ChaCha8 stream keyed by the
//! master seed and a [`StreamKey`]. ChaCha exposes 2^64 independent streams
//! per key, so trials can run in any order or in parallel and still consume
//! exactly the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Distinct purposes never share random numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Purpose {
    Nodes = 1,
    TargetChannel = 2,
    InterferenceChannels = 3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub purpose: Purpose,
    /// Antenna count of the run the trial belongs to.
    pub antennas: u32,
    pub trial: u32,
}

impl StreamKey {
    pub const MAX_ANTENNAS: u32 = (1 << 24) - 1;

    pub fn new(purpose: Purpose, antennas: usize, trial: usize) -> Self {
        assert!(
            antennas <= Self::MAX_ANTENNAS as usize,
            "antenna count {antennas} too large for stream key"
        );
        let trial = u32::try_from(trial).expect("trial index exceeds u32");
        Self {
            purpose,
            antennas: antennas as u32,
            trial,
        }
    }

    /// Packs the key as `purpose:8 | antennas:24 | trial:32`.
    pub fn stream_id(&self) -> u64 {
        ((self.purpose as u64) << 56) | ((self.antennas as u64) << 32) | self.trial as u64
    }
}

pub type Stream = ChaCha8Rng;

pub fn stream(master_seed: u64, key: StreamKey) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(key.stream_id());
    rng
}
