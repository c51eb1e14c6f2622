use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has no rows or columns")]
    Empty,
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NotFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not symmetric (max |S - S^T| = {deviation:.3e})")]
    NotSymmetric { deviation: f64 },
    #[error("matrix is not orthogonal (max |M^T M - I| = {deviation:.3e})")]
    NotOrthogonal { deviation: f64 },
    #[error("not a rotation: {0}")]
    NotARotation(String),
    #[error("rotation is not proper (angle {angle})")]
    NotProper { angle: f64 },
    #[error("bad angle {angle}: {reason}")]
    BadAngle { angle: f64, reason: &'static str },
    #[error("an eigenplane of the first operator meets an eigenplane of the second")]
    IntersectionNonTrivial,
    #[error("restricted projection is numerically singular (condition number {condition:.3e})")]
    SingularProjection { condition: f64 },
    #[error("complex line is spanned by a real vector up to phase")]
    DegenerateLine,
    #[error("representation is reducible")]
    NotIrreducible,
    #[error("<s(v), t(v)> is not constant over unit vectors (spread {spread:.3e})")]
    NotConstant { spread: f64 },
    #[error("map does not intertwine the pairs (residual {residual:.3e})")]
    NotIntertwiner { residual: f64 },
    #[error("intertwiner does not scale all vectors equally (relative spread {spread:.3e})")]
    ScaleNotConstant { spread: f64 },
    #[error("bad dimension {n}: {reason}")]
    BadDimension { n: usize, reason: &'static str },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::SingularProjection { .. }
                | Error::NotConstant { .. }
                | Error::ScaleNotConstant { .. }
                | Error::Numerical(_)
        )
    }
}
