use thiserror::Error;

/// Every failure the workbench can report.
///
/// Variants fall into two families that the CLI maps to different exit
/// codes: input problems (malformed files, wrong dimensions, elements
/// outside the algebra) and mathematical hypothesis failures (singular
/// input, no unit, not a deformation).
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not normal (residual {residual:.3e})")]
    NotNormal { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error(
        "matrix is singular: min singular value {min_singular:.3e} is below the invertibility floor times the norm {norm:.3e}; invertibility is required"
    )]
    Singular { min_singular: f64, norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("element is not a member of the algebra (residual {residual:.3e})")]
    NotMember { residual: f64 },

    #[error("u not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("p is not a central projection of the algebra: {0}")]
    NotCentralProjection(String),

    #[error("could not isolate minimal central projections after {attempts} probes")]
    CenterDegenerate { attempts: usize },

    #[error("could not draw an invertible element after {attempts} shifts")]
    CouldNotInvert { attempts: usize },

    #[error("candidate product has no unit (residual {residual:.3e})")]
    NoUnit { residual: f64 },

    #[error("candidate is not a deformation: {reason} (residual {residual:.3e})")]
    NotDeformation { reason: String, residual: f64 },

    #[error("the algebra has trivial center; no central non-scalar witness exists")]
    CenterTrivial,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than a failed hypothesis.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch(_)
                | Error::InvalidMatrix(_)
                | Error::InvalidTolerance(_)
                | Error::NotMember { .. }
                | Error::NotUnitary { .. }
                | Error::NotCentralProjection(_)
                | Error::InvalidInput(_)
                | Error::Io { .. }
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
