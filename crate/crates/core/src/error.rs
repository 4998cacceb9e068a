use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |a - a*| = {residual:e}, tolerance {tol:e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e}, tolerance {tol:e})")]
    NotPsd { min_eigenvalue: f64, tol: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("elements live over different algebras: {left:?} vs {right:?}")]
    AlgebraMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("module mismatch: {0}")]
    ModuleMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("seminorm support {lower:?} is not contained in {upper:?}")]
    NotComparable {
        upper: Vec<usize>,
        lower: Vec<usize>,
    },

    #[error("block index {index} out of range for an algebra with {blocks} blocks")]
    InvalidSupport { index: usize, blocks: usize },

    #[error(
        "not a module map: block {block} fails to commute with the matrix unit E({row},{col}) (residual {residual:e})"
    )]
    NotAModuleMap {
        block: usize,
        row: usize,
        col: usize,
        residual: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("document error: {0}")]
    Document(String),
}
