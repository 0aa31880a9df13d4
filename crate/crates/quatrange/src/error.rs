//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows} rows of lengths up to {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("expected a skew-hermitian matrix (deviation {0:.3e})")]
    NotSkewHermitian(f64),

    #[error("complex matrix is outside the adjoint image (block symmetry off by {0:.3e})")]
    NotAdjointImage(f64),

    #[error("adjoint image must have even dimension, got {0}")]
    OddAdjointDimension(usize),

    #[error("vector must have unit norm, got {0}")]
    NotUnit(f64),

    #[error("slice axis must be a unit pure quaternion")]
    InvalidSliceAxis,

    #[error("W∩ℝ empty for 1×1 nonreal input")]
    NoRealPoint,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("ellipse parameters out of domain: need alpha, k1, k2 > 0 and alpha^2 > k1*k2")]
    EllipseDomain,

    #[error("degenerate bild without a real segment")]
    DegenerateBild,

    #[error("derivative probe schedule needs at least two usable steps")]
    ProbeSchedule,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
