//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unsupported stencil order {0} (supported: 2, 4)")]
    UnsupportedOrder(usize),
    #[error("mass parameter must be non-negative, got {0}")]
    NegativeMass(f64),
    #[error("longitudinal mode requires mu > 0; it violates the massless divergence constraint")]
    LongitudinalRequiresMass,
    #[error("transverse mode requires a non-zero wavevector")]
    TransverseZeroWavevector,
    #[error("wavevector incommensurate with the periodic grid: {0}")]
    Incommensurate(String),
    #[error("time step {dt} exceeds stability limit {limit}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("field evolution diverged (non-finite values) at step {step}")]
    Diverged { step: usize },
    #[error("singular tridiagonal system")]
    SingularSystem,
    #[error("probe signal has too few oscillations to measure a frequency")]
    UnresolvedFrequency,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed snapshot file: {0}")]
    MalformedSnapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
