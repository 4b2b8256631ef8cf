//! Error type shared by every module in the crate.

use thiserror::Error;

/// Everything that can go wrong while configuring or running a simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// Block transforms only operate on power-of-two lengths.
    #[error("length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    /// An input slice had the wrong number of elements.
    #[error("{context}: expected length {expected}, got {got}")]
    Length {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A candidate-offset range reaches outside the sample stream.
    #[error("offset range {start}..{end} does not fit a stream of {len} samples")]
    Range { start: usize, end: usize, len: usize },

    /// A parameter combination that can never produce a valid run.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An input that must carry data was empty.
    #[error("empty input: {0}")]
    Empty(&'static str),

    /// File output failed; carries the path so callers can report it.
    #[error("cannot write `{path}`: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
