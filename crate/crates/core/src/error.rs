use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix size {size} is too small (need at least {min})")]
    TooSmall { size: usize, min: usize },

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("resonance: {what} vanishes at n = {index}")]
    Resonance { what: &'static str, index: usize },

    #[error("reducible representation: u_{index} vanishes")]
    Reducible { index: usize },

    #[error("overflow guard: size {size} with q = {q} gives entries of order {magnitude:e} (limit 1e12)")]
    OverflowGuard { size: usize, q: f64, magnitude: f64 },

    #[error("invalid normalization: {0}")]
    InvalidNormalization(String),

    #[error("not a q-oscillator representation: {0}")]
    NotQOscillator(String),

    #[error("not decomposable by chain partition: {0}")]
    NotDecomposable(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("spectrum mismatch: {0}")]
    SpectrumMismatch(String),

    #[error("not reducible to monic form: subdiagonal entry {0} vanishes")]
    NotMonic(usize),

    #[error("pole at x = 0 (degree {0} term)")]
    Pole(i32),

    #[error("index out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
