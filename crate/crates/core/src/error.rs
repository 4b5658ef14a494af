use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |m - m^H| = {defect:e} exceeds {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("expected a {expected}x{expected} matrix for local dimension {d}, got {rows}x{cols}")]
    DimensionMismatch {
        d: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("local dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("local dimensions differ: {0} vs {1}")]
    LocalDimensionsDiffer(usize, usize),

    #[error("unknown example `{0}` (expected bell-seed, uniform-diagonal or gauss-phase)")]
    UnknownExample(String),

    #[error("example `{name}` is not defined for d = {d}")]
    ExampleUnavailable { name: &'static str, d: usize },

    #[error("block eigenvalue {re:e}{im:+e}i has imaginary part above {tol:e}")]
    ComplexSpectrum { re: f64, im: f64, tol: f64 },

    #[error("state failed certification: {0}")]
    Certification(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
