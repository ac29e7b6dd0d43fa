use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inverse temperature must be non-negative, got {0}")]
    NegativeBeta(f64),
    #[error("inverse temperature must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("energy gap must be positive, got {0}")]
    NonPositiveGap(f64),
    #[error("cannot normalise a zero-length direction")]
    ZeroDirection,
    #[error("vector is not unit length (norm {0})")]
    NotUnit(f64),
    #[error("unphysical state: {0}")]
    Unphysical(String),
    #[error("population {q} lies outside the reachable interval [{lo}, {hi}]")]
    OutsideInterval { q: f64, lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
