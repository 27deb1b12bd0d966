use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("filter half-width {half_width} exceeds signal length {len}")]
    FilterTooLong { half_width: usize, len: usize },

    #[error("signal too short: need at least {need} samples, got {got}")]
    SignalTooShort { need: usize, got: usize },

    #[error("too few extrema: need at least {need}, found {found}")]
    TooFewExtrema { need: usize, found: usize },

    #[error("reference signal has zero norm")]
    ZeroReference,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("invalid Fokker-Planck coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("no steady state after {steps} steps (residual {residual:e})")]
    NoSteadyState { steps: usize, residual: f64 },

    #[error("spectral grid of {grid} points cannot hold a filter with {support} taps")]
    GridTooSmall { grid: usize, support: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown example '{0}'")]
    UnknownExample(String),

    #[error("noise has zero norm")]
    ZeroNoise,

    #[error("parse error at row {row}: {reason}")]
    Parse { row: usize, reason: String },

    #[error("time stamps are not uniformly spaced (row {row})")]
    NonUniformSpacing { row: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
