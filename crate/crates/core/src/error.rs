use thiserror::Error;

/// Errors produced anywhere in the steering pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported algebra dimension {0} (expected 1..=6)")]
    UnsupportedDimension(usize),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("norm {0:e} is too close to zero to normalize")]
    NearZeroNorm(f64),
    #[error("grade {grade} out of range for G_{dim}")]
    GradeOutOfRange { grade: usize, dim: usize },
    #[error("not a rotor: {0}")]
    NotARotor(String),
    #[error("expected a unit vector, got norm {0}")]
    NotUnitVector(f64),
    #[error("vectors are antipodal; the two-vector rotor formula is singular")]
    AntipodalVectors,
    #[error("vectors are linearly dependent at flag stage {stage}")]
    DependentVectors { stage: usize },
    #[error("flag mismatch: {0}")]
    FlagMismatch(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("rotor does not fix e1 (moves it by {0:e})")]
    RotorDomain(f64),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no start converged ({starts} starts attempted); target may be outside the sampled bounds")]
    InfeasibleTarget { starts: usize },
    #[error("endpoint error {error:e} exceeds acceptance bound {bound:e}")]
    EndpointMismatch { error: f64, bound: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
