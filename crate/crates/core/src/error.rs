use thiserror::Error;

/// Errors raised by the matrix kernel, state constructors and channel routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is not Hermitian (max |a - a^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    ConvergenceFailure { sweeps: usize, residual: f64 },

    #[error("trace is not one (got {re} + {im}i)")]
    TraceNotOne { re: f64, im: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("Bloch vector has length {length} > 1")]
    BlochOutsideBall { length: f64 },

    #[error("dimension {d} exceeds the limit {limit} for exhaustive enumeration")]
    DimensionTooLarge { d: usize, limit: usize },

    #[error("mixing weight p = {p} is outside [{lo}, {hi}]")]
    WeightOutOfRange { p: f64, lo: f64, hi: f64 },

    #[error("Bell-diagonal parameters violate constraint {constraint}: value {value}")]
    InvalidBellParams { constraint: String, value: f64 },

    #[error("off-diagonal sum has non-zero imaginary part {im:e}")]
    NonRealSum { im: f64 },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("entanglement-breaking certificate failed for d = {d}: residual {residual:e} > {tol:e}")]
    CertificateFailed { d: usize, residual: f64, tol: f64 },

    #[error("sample count must be at least one")]
    SampleCountZero,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
