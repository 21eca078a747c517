use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid generator: {0}")]
    Generator(String),

    #[error("permutation length must be at least 1")]
    EmptyPermutation,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("odd-length sequence ({0}) cannot be punctured")]
    OddLength(usize),

    #[error("invalid coupling parameters: {0}")]
    Params(String),

    #[error("NaN in decoder input")]
    NanInput,

    #[error("stream of {blocks} blocks is shorter than the window ({window})")]
    StreamTooShort { blocks: usize, window: usize },

    #[error("stop rule can never be met: {0}")]
    StopRule(String),

    #[error("target BER {target:e} not bracketed between {lo} dB and {hi} dB")]
    NotBracketed { target: f64, lo: f64, hi: f64 },
}
