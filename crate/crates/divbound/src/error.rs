use thiserror::Error;

/// Errors raised by distribution validation and the numeric kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entry {index} must be strictly positive, got {value}")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("entries sum to {sum}, expected 1 within {tolerance}")]
    SumMismatch { sum: f64, tolerance: f64 },

    #[error("distribution needs at least 2 entries, got {len}")]
    TooShort { len: usize },

    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("distribution lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension must be at least 2, got {n}")]
    BadDimension { n: usize },

    #[error("ratio range must satisfy 0 < r <= 1 <= R < inf, got r={lower}, R={upper}")]
    InvalidRange { lower: f64, upper: f64 },

    #[error("non-finite result while computing {context}")]
    NonFiniteResult { context: &'static str },

    #[error("no finite extrema available for s={s} on an unbounded range")]
    UnsupportedRegime { s: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
