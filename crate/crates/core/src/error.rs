//! Error type shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed wav: {0}")]
    WavFormat(String),

    #[error("non-PCM encoding unsupported (format code {0})")]
    NonPcm(u16),

    #[error("multi-channel unsupported ({0} channels)")]
    MultiChannel(u16),

    #[error("unsupported bit depth {0} (expected 8 or 16)")]
    BitDepth(u16),

    #[error("empty buffer")]
    EmptyBuffer,

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("non-finite input")]
    NonFiniteInput,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("sample rate mismatch: {0} Hz vs {1} Hz")]
    SampleRateMismatch(u32, u32),

    #[error("zero-power clean signal")]
    ZeroPowerClean,

    #[error("zero-power noise")]
    ZeroPowerNoise,

    #[error("noise shorter than clean ({noise} < {clean} samples)")]
    NoiseTooShort { noise: usize, clean: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular system in normalized update")]
    SingularSystem,
}
