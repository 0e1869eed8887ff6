use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd integer >= 3")]
    InvalidModulus(usize),

    #[error("generator {generator} is not a unit modulo {v}")]
    NotAUnit { v: usize, generator: usize },

    #[error("index {index} out of range for length {v}")]
    IndexOutOfRange { v: usize, index: usize },

    #[error("entry {value} at position {position} is not +1 or -1")]
    NotPlusMinusOne { position: usize, value: i64 },

    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("divisor {d} does not divide {v}")]
    NotADivisor { v: usize, d: usize },

    #[error("{corollary} constraint does not apply to v={v} with d={d}")]
    CorollaryNotApplicable {
        corollary: &'static str,
        v: usize,
        d: usize,
    },

    #[error("support is not a union of orbits: {index} is in the set but {image} is not")]
    NotOrbitClosed { index: usize, image: usize },

    #[error("no union of orbits has total size {target}")]
    UnattainableSize { target: usize },

    #[error("invalid parameters (v={v}; r={r}, s={s}): {reason}")]
    InvalidParams {
        v: usize,
        r: usize,
        s: usize,
        reason: &'static str,
    },

    #[error("parameter index {index} out of range: v={v} has {available} feasible parameter sets")]
    ParamIndexOutOfRange {
        v: usize,
        index: usize,
        available: usize,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("pool mismatch: {0}")]
    PoolMismatch(String),

    #[error("{path}: line {line}: records are not in sorted order")]
    Unsorted { path: PathBuf, line: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}
