use thiserror::Error;

/// Errors raised by the numeric core and the watermarking schemes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {}x{} vs {}x{}", left.0, left.1, right.0, right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("length mismatch: expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("SVD did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("correlation is undefined when an input has zero variance")]
    UndefinedCorrelation,

    #[error(
        "rectangle {height}x{width} at ({top}, {left}) exceeds {rows}x{cols} matrix"
    )]
    OutOfBounds {
        top: usize,
        left: usize,
        height: usize,
        width: usize,
        rows: usize,
        cols: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
