//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension {requested} exceeds configured cap {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("slice index {slice} out of range 1..={slices}")]
    SliceOutOfRange { slice: usize, slices: usize },

    #[error("state norm {norm} departs from 1 beyond tolerance")]
    NotUnitNorm { norm: f64 },

    #[error("operation requires action kind {expected}, got {got}")]
    WrongActionKind { expected: String, got: String },

    #[error("degenerate normalization: |denominator| = {magnitude:.3e} below threshold")]
    DegenerateNormalization { magnitude: f64 },

    #[error("non-finite entries encountered in {0}")]
    NonFinite(&'static str),

    #[error("truncation bound violated for mode {mode}: need n_max >= {required_n_max}")]
    Truncation { mode: usize, required_n_max: usize },

    #[error("foliation vector is not timelike (n·n = {norm_sq})")]
    NotTimelike { norm_sq: f64 },

    #[error("correlator pole too close at momentum {momentum:?} (|denominator| = {magnitude:.3e})")]
    PoleProximity { momentum: Vec<f64>, magnitude: f64 },

    #[error("quadrature did not reach target {target:.3e}; achieved bound {achieved:.3e}")]
    QuadratureAccuracy { achieved: f64, target: f64 },

    #[error("evolution unstable: field norm grew by factor {growth:.3e} (limit {limit:.3e})")]
    Instability { growth: f64, limit: f64 },

    #[error("trace {trace} departs from 1 beyond tolerance")]
    TraceNotOne { trace: f64 },

    #[error("boosted integrand leaves the configured cutoff (rapidity {rapidity})")]
    CutoffViolation { rapidity: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
