use thiserror::Error;

/// Error type shared by all library modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("svd did not converge for {rows}x{cols} matrix")]
    SvdNonConvergence { rows: usize, cols: usize },

    #[error("complex not elliptic at xi = {witness:?}")]
    NotElliptic { witness: Vec<f64> },

    #[error("singular symbol at lattice frequency {witness:?}")]
    SingularAtFrequency { witness: Vec<i64> },

    #[error("f is in the kernel; ratio undefined")]
    KernelField,

    #[error(
        "imaginary residual {residual:.3e} exceeds threshold {threshold:.3e}; \
         multiplier bank applied to a real field is not hermitian-symmetric"
    )]
    ImaginaryResidual { residual: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
