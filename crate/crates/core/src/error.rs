use thiserror::Error;

/// Errors raised by construction and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin j = {j}: {reason}")]
    InvalidSpin { j: f64, reason: &'static str },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e} exceeds {limit:.3e})")]
    NotHermitian { deviation: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("imaginary residue {residue:.3e} exceeds {limit:.3e}: {context}")]
    ImaginaryResidue {
        residue: f64,
        limit: f64,
        context: &'static str,
    },

    #[error("eigendecomposition residual {residual:.3e} exceeds {limit:.3e}")]
    EigenResidual { residual: f64, limit: f64 },

    #[error("quadruple group not closed under conjugation: missing partner of {quad:?}")]
    GroupNotConjugationClosed { quad: [usize; 4] },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field `{label}` has {count} negative value(s); distance requires nonnegative fields")]
    NegativeField { label: String, count: usize },

    #[error("Tr(fg) = {value:.3e} is not positive; fields `{f}` and `{g}` do not overlap")]
    NonpositiveOverlap { value: f64, f: String, g: String },
}

pub type Result<T> = std::result::Result<T, Error>;
