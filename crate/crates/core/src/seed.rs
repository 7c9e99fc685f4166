//! Deterministic seeding.
//!
//! Every random quantity in a run is drawn from a ChaCha20 stream keyed by
//! the master seed. Each consumer gets its own stream id, so the amount drawn
//! by one consumer never shifts the values seen by another:
//!
//! ```text
//! key    = ChaCha20Rng::seed_from_u64(master_seed)   (rand_core's PCG32 expansion)
//! stream = (label_id << 32) | index
//! ```
//!
//! `index` lets one label fan out further (e.g. one label stream per data set).

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identity string written into run metadata.
pub const GENERATOR_ID: &str = "chacha20(seed_from_u64) stream=(label_id<<32)|index";

/// The fixed set of consumers that may draw randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamLabel {
    Train,
    Holdout,
    Fresh,
    Signs,
    Labels,
    Permutation,
}

impl StreamLabel {
    pub const ALL: [StreamLabel; 6] = [
        StreamLabel::Train,
        StreamLabel::Holdout,
        StreamLabel::Fresh,
        StreamLabel::Signs,
        StreamLabel::Labels,
        StreamLabel::Permutation,
    ];

    pub fn id(self) -> u64 {
        match self {
            StreamLabel::Train => 1,
            StreamLabel::Holdout => 2,
            StreamLabel::Fresh => 3,
            StreamLabel::Signs => 4,
            StreamLabel::Labels => 5,
            StreamLabel::Permutation => 6,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StreamLabel::Train => "train",
            StreamLabel::Holdout => "holdout",
            StreamLabel::Fresh => "fresh",
            StreamLabel::Signs => "signs",
            StreamLabel::Labels => "labels",
            StreamLabel::Permutation => "permutation",
        }
    }
}

impl fmt::Display for StreamLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StreamLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StreamLabel::ALL
            .into_iter()
            .find(|label| label.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown stream label '{s}'")))
    }
}

/// Stream for `label` under `master_seed`.
pub fn seed_substream(master_seed: u64, label: StreamLabel) -> ChaCha20Rng {
    seed_substream_indexed(master_seed, label, 0)
}

/// Stream for the `index`-th sub-consumer of `label`.
pub fn seed_substream_indexed(master_seed: u64, label: StreamLabel, index: u32) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream((label.id() << 32) | u64::from(index));
    rng
}

/// String-labelled variant used by configuration code.
pub fn seed_substream_named(master_seed: u64, label: &str) -> Result<ChaCha20Rng> {
    Ok(seed_substream(master_seed, label.parse()?))
}
