use thiserror::Error;

use crate::language::FactorSet;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested word length does not fit the 128-bit length table.
    #[error("length of omega_{n} exceeds 128-bit capacity")]
    CapacityExceeded { n: u32 },

    /// An index computation left the representable integer range.
    #[error("index arithmetic overflowed: {0}")]
    IndexOverflow(&'static str),

    #[error("materialization of {requested} symbols exceeds cap of {cap}")]
    CapExceeded { requested: u128, cap: u64 },

    #[error("factor set of length {length} not stabilized by horizon {horizon_n}")]
    NotStabilized {
        length: usize,
        horizon_n: u32,
        partial: Box<FactorSet>,
    },

    #[error("word {word} does not occur in [{lo}, {hi}]")]
    NoOccurrence { word: String, lo: i128, hi: i128 },

    /// Absence within a finite horizon; never a disproof.
    #[error("no match within horizon {horizon}")]
    NotFoundWithinHorizon { horizon: i128 },

    #[error("points are equal; expansivity needs a distinct pair")]
    PairEqual,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
