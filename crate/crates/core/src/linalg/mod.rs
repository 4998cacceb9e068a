//! Dense complex linear algebra: the substrate every block-level computation
//! reduces to.

mod eig;
mod matrix;
mod svd;

pub use eig::{hermitian_eig, psd_sqrt, HermitianEig};
pub use matrix::{CMatrix, C64, ONE, ZERO};
pub use svd::{column_space_projector, mat_pinv, numerical_rank, rank_cutoff, svd, Svd};

/// Relative singular-value cutoff used by every module-level pseudoinverse.
///
/// Values at or below `DEFAULT_RANK_RTOL · σ_max` (per block) count as zero.
pub const DEFAULT_RANK_RTOL: f64 = 1e-10;
