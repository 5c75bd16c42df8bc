//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in grid construction, integration,
/// analysis, and the scenario harness.
#[derive(Debug, Error)]
pub enum SdError {
    #[error("dimension must be 1, 2 or 3, got {0}")]
    InvalidDimension(usize),

    #[error("points per axis must be a power of two >= 8, got {0}")]
    InvalidGridSize(usize),

    #[error("box extent must be positive, got {0}")]
    NonPositiveExtent(f64),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("Lp norm order must satisfy p >= 1, got {0}")]
    InvalidNormOrder(f64),

    #[error("multiplier evaluated to a non-finite value at wavenumber {xi:?}")]
    NonFiniteMultiplier { xi: Vec<f64> },

    #[error("integration diverged: non-finite sample detected at t = {t}")]
    IntegrationDiverged { t: f64 },

    #[error(
        "fixed-point iteration did not contract after {iterations} iterations \
         (last update {last_delta:.3e}); the requested window is too large"
    )]
    NoContraction { iterations: usize, last_delta: f64 },

    #[error(
        "spectral resampling would alias: source occupies modes up to index \
         {occupied} per axis but the target grid only carries {available}"
    )]
    Aliasing { occupied: usize, available: usize },

    #[error("operation requires a nonzero field")]
    ZeroField,

    #[error("operation requires a nonempty ensemble")]
    EmptyEnsemble,

    #[error("operation requires dimension {expected}, state has dimension {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("(s, l) = ({s}, {ell}) lies outside the admissible region: {violated}")]
    OutsideRegionW { s: f64, ell: f64, violated: String },

    #[error("need at least {needed} diagnostic records, got {got}")]
    TooFewRecords { needed: usize, got: usize },

    #[error("space-time trace needs at least two snapshots")]
    SingleSnapshot,

    #[error("envelope violated: measured f exceeded the a-priori bound by {excess:.3e} at t = {t}")]
    EnvelopeViolated { t: f64, excess: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("snapshot format error: {0}")]
    SnapshotFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SdError>;
