//! Finite direct sums of full matrix algebras and their C*-seminorm lattice.
//!
//! `A = M_{n_1} ⊕ … ⊕ M_{n_k}`. Every subset `S` of block indices gives a
//! C*-seminorm `p_S(a) = max_{i∈S} ‖a_i‖`; the quotient `A_p` is the direct
//! sum of the blocks in `S`, and for `S ⊇ T` the connecting map drops the
//! blocks of `S \ T`. The empty support yields the zero algebra, which has no
//! blocks at all.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, mat_pinv, CMatrix, C64, DEFAULT_RANK_RTOL};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockAlgebra {
    dims: Vec<usize>,
}

impl BlockAlgebra {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidAlgebra(
                "an algebra needs at least one block".into(),
            ));
        }
        if let Some(i) = dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidAlgebra(format!("block {i} has size 0")));
        }
        Ok(Self { dims })
    }

    /// The algebra with no blocks; quotient by the empty seminorm.
    pub fn zero_algebra() -> Self {
        Self { dims: Vec::new() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn is_zero_algebra(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn identity(&self) -> AlgElem {
        AlgElem {
            blocks: self.dims.iter().map(|&n| CMatrix::identity(n)).collect(),
        }
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem {
            blocks: self.dims.iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        }
    }

    pub fn scalar(&self, c: C64) -> AlgElem {
        AlgElem {
            blocks: self
                .dims
                .iter()
                .map(|&n| CMatrix::identity(n).scale(c))
                .collect(),
        }
    }

    pub fn seminorm(&self, support: &[usize]) -> Result<Seminorm> {
        Seminorm::new(self, support)
    }

    pub fn full_seminorm(&self) -> Seminorm {
        Seminorm {
            dims: self.dims.clone(),
            support: (0..self.dims.len()).collect(),
        }
    }

    /// Every seminorm of the lattice, in bitmask order (`2^k` of them).
    pub fn all_seminorms(&self) -> Vec<Seminorm> {
        let k = self.dims.len();
        (0u64..1 << k)
            .map(|mask| Seminorm {
                dims: self.dims.clone(),
                support: (0..k).filter(|&i| mask >> i & 1 == 1).collect(),
            })
            .collect()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.dims == other.dims {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.dims.clone(),
                right: other.dims.clone(),
            })
        }
    }
}

/// An element of a [`BlockAlgebra`]: one square complex matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElem {
    blocks: Vec<CMatrix>,
}

impl AlgElem {
    pub fn new(algebra: &BlockAlgebra, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks supplied for an algebra with {} blocks",
                blocks.len(),
                algebra.num_blocks()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(algebra.dims()).enumerate() {
            if b.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "block {i} is {}x{}, expected {n}x{n}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(Self { blocks })
    }

    /// Infers the algebra from the block sizes.
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Result<Self> {
        if let Some((i, b)) = blocks
            .iter()
            .enumerate()
            .find(|(_, b)| !b.is_square() || b.rows() == 0)
        {
            return Err(Error::DimensionMismatch(format!(
                "block {i} is {}x{}, expected a nonempty square matrix",
                b.rows(),
                b.cols()
            )));
        }
        Ok(Self { blocks })
    }

    pub fn algebra(&self) -> BlockAlgebra {
        BlockAlgebra {
            dims: self.blocks.iter().map(CMatrix::rows).collect(),
        }
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        let same = self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.rows() == b.rows());
        if same {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.algebra().dims,
                right: other.algebra().dims,
            })
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// The involution: blockwise conjugate transpose.
    pub fn star(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(CMatrix::adjoint).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    /// C*-norm, i.e. the seminorm with full support.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(CMatrix::norm2).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(CMatrix::max_abs).fold(0.0, f64::max)
    }

    /// True iff every block is Hermitian within `tol` with smallest eigenvalue ≥ −tol.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| {
            b.hermitian_residual() <= tol
                && hermitian_eig(b, tol)
                    .map(|e| e.values.last().is_none_or(|&min| min >= -tol))
                    .unwrap_or(false)
        })
    }

    /// Positivity at the default tolerance `1e-9·(1 + ‖a‖)`.
    pub fn is_positive_default(&self) -> bool {
        self.is_positive(1e-9 * (1.0 + self.norm()))
    }

    /// Moore–Penrose inverse in the algebra, computed blockwise.
    pub fn pinv(&self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .map(|b| mat_pinv(b, DEFAULT_RANK_RTOL))
                .collect(),
        }
    }

    /// The four Penrose residuals `‖a s a − a‖, ‖s a s − s‖, ‖(a s)* − a s‖, ‖(s a)* − s a‖`.
    pub fn penrose_residuals(&self, s: &Self) -> Result<[f64; 4]> {
        self.check_same(s)?;
        let as_ = self.mul(s)?;
        let sa = s.mul(self)?;
        Ok([
            as_.mul(self)?.sub(self)?.norm(),
            sa.mul(s)?.sub(s)?.norm(),
            as_.star().sub(&as_)?.norm(),
            sa.star().sub(&sa)?.norm(),
        ])
    }
}

/// A C*-seminorm of a [`BlockAlgebra`], identified with its support set.
///
/// `p ≥ q` iff `support(p) ⊇ support(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Seminorm {
    dims: Vec<usize>,
    support: Vec<usize>,
}

impl Seminorm {
    /// Indices are deduplicated and sorted.
    pub fn new(algebra: &BlockAlgebra, support: &[usize]) -> Result<Self> {
        let k = algebra.num_blocks();
        if let Some(&index) = support.iter().find(|&&i| i >= k) {
            return Err(Error::InvalidSupport { index, blocks: k });
        }
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        Ok(Self {
            dims: algebra.dims.clone(),
            support,
        })
    }

    pub fn algebra(&self) -> BlockAlgebra {
        BlockAlgebra {
            dims: self.dims.clone(),
        }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// The quotient algebra `A_p`.
    pub fn quotient_algebra(&self) -> BlockAlgebra {
        BlockAlgebra {
            dims: self.support.iter().map(|&i| self.dims[i]).collect(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.support.len() == self.dims.len()
    }

    /// `self ≥ other` in the seminorm order.
    pub fn dominates(&self, other: &Self) -> bool {
        self.dims == other.dims
            && other
                .support
                .iter()
                .all(|i| self.support.binary_search(i).is_ok())
    }

    pub(crate) fn check_algebra(&self, algebra: &BlockAlgebra) -> Result<()> {
        self.algebra().check_same(algebra)
    }

    /// Positions, within `self`'s quotient, of the blocks kept by `lower`.
    pub(crate) fn connect_positions(&self, lower: &Self) -> Result<Vec<usize>> {
        if self.dims != lower.dims {
            return Err(Error::AlgebraMismatch {
                left: self.dims.clone(),
                right: lower.dims.clone(),
            });
        }
        lower
            .support
            .iter()
            .map(|i| {
                self.support
                    .binary_search(i)
                    .map_err(|_| Error::NotComparable {
                        upper: self.support.clone(),
                        lower: lower.support.clone(),
                    })
            })
            .collect()
    }

    /// `p(a) = max_{i ∈ support} ‖a_i‖`; zero on the empty support.
    pub fn eval(&self, a: &AlgElem) -> Result<f64> {
        self.check_algebra(&a.algebra())?;
        Ok(self
            .support
            .iter()
            .map(|&i| a.blocks[i].norm2())
            .fold(0.0, f64::max))
    }

    /// `π_p(a)`: keep exactly the support blocks.
    pub fn localize(&self, a: &AlgElem) -> Result<AlgElem> {
        self.check_algebra(&a.algebra())?;
        Ok(AlgElem {
            blocks: self.support.iter().map(|&i| a.blocks[i].clone()).collect(),
        })
    }

    /// `π_pq(a_p)` for `q ≤ p`, where `a_p` lives over `A_p`.
    pub fn connect(&self, lower: &Self, a_p: &AlgElem) -> Result<AlgElem> {
        let positions = self.connect_positions(lower)?;
        self.quotient_algebra().check_same(&a_p.algebra())?;
        Ok(AlgElem {
            blocks: positions.iter().map(|&j| a_p.blocks[j].clone()).collect(),
        })
    }
}
