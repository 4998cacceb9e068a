//! Free Hilbert modules `Aⁿ` over a [`BlockAlgebra`].
//!
//! A vector `x = (x_1, …, x_n)` is stored per block: block `b` holds the
//! `(n·d_b)×d_b` matrix obtained by stacking the `b`-th blocks of the
//! coordinates. In that form the inner product is `X_b* Y_b`, right
//! multiplication by `a` is `X_b a_b`, and a module map acts by left
//! multiplication with an `(m·d_b)×(n·d_b)` matrix.

use crate::algebra::{AlgElem, BlockAlgebra, Seminorm};
use crate::error::{Error, Result};
use crate::linalg::{column_space_projector, hermitian_eig, CMatrix, DEFAULT_RANK_RTOL};
use crate::opmap::ModuleMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeModule {
    algebra: BlockAlgebra,
    rank: usize,
}

impl FreeModule {
    pub fn new(algebra: BlockAlgebra, rank: usize) -> Self {
        Self { algebra, rank }
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `E ⊕ F`, with the coordinates of `E` first.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.algebra.check_same(&other.algebra)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            rank: self.rank + other.rank,
        })
    }

    /// `E_p`: the same rank over the quotient algebra.
    pub fn localize(&self, p: &Seminorm) -> Result<Self> {
        p.check_algebra(&self.algebra)?;
        Ok(Self {
            algebra: p.quotient_algebra(),
            rank: self.rank,
        })
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ModuleMismatch(format!(
                "rank {} over {:?} vs rank {} over {:?}",
                self.rank,
                self.algebra.dims(),
                other.rank,
                other.algebra.dims()
            )))
        }
    }

    /// Row count of the stacked representation in block `b`.
    pub(crate) fn stack_rows(&self, b: usize) -> usize {
        self.rank * self.algebra.dims()[b]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModVector {
    module: FreeModule,
    stacks: Vec<CMatrix>,
}

impl ModVector {
    pub fn new(module: &FreeModule, coords: &[AlgElem]) -> Result<Self> {
        if coords.len() != module.rank {
            return Err(Error::ModuleMismatch(format!(
                "{} coordinates supplied for a module of rank {}",
                coords.len(),
                module.rank
            )));
        }
        for c in coords {
            module.algebra.check_same(&c.algebra())?;
        }
        let stacks = module
            .algebra
            .dims()
            .iter()
            .enumerate()
            .map(|(b, &d)| {
                let parts: Vec<&CMatrix> = coords.iter().map(|c| c.block(b)).collect();
                CMatrix::vstack(d, &parts)
            })
            .collect();
        Ok(Self {
            module: module.clone(),
            stacks,
        })
    }

    /// Builds a vector from its per-block stacks.
    pub fn from_stacks(module: &FreeModule, stacks: Vec<CMatrix>) -> Result<Self> {
        let dims = module.algebra.dims();
        if stacks.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} stacks supplied for an algebra with {} blocks",
                stacks.len(),
                dims.len()
            )));
        }
        for (b, (s, &d)) in stacks.iter().zip(dims).enumerate() {
            if s.shape() != (module.rank * d, d) {
                return Err(Error::DimensionMismatch(format!(
                    "stack {b} is {}x{}, expected {}x{d}",
                    s.rows(),
                    s.cols(),
                    module.rank * d
                )));
            }
        }
        Ok(Self {
            module: module.clone(),
            stacks,
        })
    }

    pub fn zero(module: &FreeModule) -> Self {
        let stacks = module
            .algebra
            .dims()
            .iter()
            .map(|&d| CMatrix::zeros(module.rank * d, d))
            .collect();
        Self {
            module: module.clone(),
            stacks,
        }
    }

    /// Standard basis vector `e_j` (identity in coordinate `j`).
    pub fn basis(module: &FreeModule, j: usize) -> Self {
        assert!(j < module.rank, "basis index {j} out of range");
        let mut x = Self::zero(module);
        for (b, &d) in module.algebra.dims().iter().enumerate() {
            x.stacks[b].set_submatrix(j * d, 0, &CMatrix::identity(d));
        }
        x
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn stacks(&self) -> &[CMatrix] {
        &self.stacks
    }

    pub fn stack(&self, b: usize) -> &CMatrix {
        &self.stacks[b]
    }

    pub fn coord(&self, i: usize) -> AlgElem {
        let blocks = self
            .module
            .algebra
            .dims()
            .iter()
            .zip(&self.stacks)
            .map(|(&d, s)| s.submatrix(i * d, 0, d, d))
            .collect();
        AlgElem::new(&self.module.algebra, blocks).expect("stack blocks are square")
    }

    pub fn coords(&self) -> Vec<AlgElem> {
        (0..self.module.rank).map(|i| self.coord(i)).collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.module.check_same(&other.module)?;
        Ok(Self {
            module: self.module.clone(),
            stacks: self
                .stacks
                .iter()
                .zip(&other.stacks)
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

    pub fn neg(&self) -> Self {
        Self {
            module: self.module.clone(),
            stacks: self.stacks.iter().map(|s| -s).collect(),
        }
    }

    /// The right module action `x·a`.
    pub fn right_mul(&self, a: &AlgElem) -> Result<Self> {
        self.module.algebra.check_same(&a.algebra())?;
        Ok(Self {
            module: self.module.clone(),
            stacks: self
                .stacks
                .iter()
                .zip(a.blocks())
                .map(|(s, ab)| s * ab)
                .collect(),
        })
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.stacks.iter().map(CMatrix::max_abs).fold(0.0, f64::max)
    }

    /// `(x, y) ∈ E ⊕ F`.
    pub fn pair(&self, other: &Self) -> Result<Self> {
        let module = self.module.direct_sum(&other.module)?;
        let stacks = self
            .stacks
            .iter()
            .zip(&other.stacks)
            .zip(module.algebra.dims())
            .map(|((x, y), &d)| CMatrix::vstack(d, &[x, y]))
            .collect();
        Ok(Self { module, stacks })
    }

    /// Splits a vector of `E ⊕ F` with `rank(E) = first_rank`.
    pub fn split(&self, first_rank: usize) -> Result<(Self, Self)> {
        if first_rank > self.module.rank {
            return Err(Error::ModuleMismatch(format!(
                "cannot split rank {} at {first_rank}",
                self.module.rank
            )));
        }
        let alg = &self.module.algebra;
        let e = FreeModule::new(alg.clone(), first_rank);
        let f = FreeModule::new(alg.clone(), self.module.rank - first_rank);
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (s, &d) in self.stacks.iter().zip(alg.dims()) {
            xs.push(s.submatrix(0, 0, first_rank * d, d));
            ys.push(s.submatrix(first_rank * d, 0, f.rank * d, d));
        }
        Ok((
            Self {
                module: e,
                stacks: xs,
            },
            Self {
                module: f,
                stacks: ys,
            },
        ))
    }

    /// `σ_p(x)`.
    pub fn localize(&self, p: &Seminorm) -> Result<Self> {
        let module = self.module.localize(p)?;
        Ok(Self {
            module,
            stacks: p
                .support()
                .iter()
                .map(|&i| self.stacks[i].clone())
                .collect(),
        })
    }

    /// `σ_pq(x_p)` for `q ≤ p`, where `self` lives over `A_p`.
    pub fn connect(&self, p: &Seminorm, q: &Seminorm) -> Result<Self> {
        let positions = p.connect_positions(q)?;
        p.quotient_algebra().check_same(&self.module.algebra)?;
        Ok(Self {
            module: FreeModule::new(q.quotient_algebra(), self.module.rank),
            stacks: positions.iter().map(|&j| self.stacks[j].clone()).collect(),
        })
    }
}

/// `⟨x, y⟩ = Σ_i x_i* y_i`.
pub fn inner(x: &ModVector, y: &ModVector) -> Result<AlgElem> {
    x.module.check_same(&y.module)?;
    let blocks = x
        .stacks
        .iter()
        .zip(&y.stacks)
        .map(|(a, b)| a.adjoint_mul(b))
        .collect();
    AlgElem::new(&x.module.algebra, blocks)
}

/// `p̄(x) = √p(⟨x, x⟩)`.
pub fn vec_seminorm(p: &Seminorm, x: &ModVector) -> Result<f64> {
    Ok(p.eval(&inner(x, x)?)?.max(0.0).sqrt())
}

/// A finitely generated submodule of a free module.
#[derive(Debug, Clone, PartialEq)]
pub struct Submodule {
    module: FreeModule,
    generators: Vec<ModVector>,
}

impl Submodule {
    pub fn new(module: &FreeModule, generators: Vec<ModVector>) -> Result<Self> {
        for g in &generators {
            module.check_same(&g.module)?;
        }
        Ok(Self {
            module: module.clone(),
            generators,
        })
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn generators(&self) -> &[ModVector] {
        &self.generators
    }

    /// Per block, the horizontal concatenation of the generator stacks.
    fn generator_matrix(&self, b: usize) -> CMatrix {
        let parts: Vec<&CMatrix> = self.generators.iter().map(|g| g.stack(b)).collect();
        CMatrix::hstack(self.module.stack_rows(b), &parts)
    }

    /// Orthogonal projection onto the submodule.
    ///
    /// In block `b` the generated right submodule is the set of stacks whose
    /// columns lie in the column space of the concatenated generator stacks,
    /// so the projection is left multiplication by that column space's projector.
    pub fn projector(&self) -> ModuleMap {
        let blocks = (0..self.module.algebra.num_blocks())
            .map(|b| column_space_projector(&self.generator_matrix(b), DEFAULT_RANK_RTOL))
            .collect();
        ModuleMap::from_blocks(&self.module, &self.module, blocks).expect("projector shapes")
    }

    /// Projection onto `F^⊥ = {x : ⟨g, x⟩ = 0 for every generator g}`.
    pub fn orth_complement(&self) -> ModuleMap {
        ModuleMap::identity(&self.module)
            .sub(&self.projector())
            .expect("same module")
    }

    /// `F^⊥` as a submodule. In each block the generator columns are an
    /// orthonormal basis of `Ran(I − P)`: eigenvectors of `I − P` with
    /// eigenvalue above ½, padded with zero columns. Using the rounded
    /// columns of `I − P` directly would turn `O(ε)` noise into spurious
    /// directions when `F` is the whole module.
    pub fn complement_submodule(&self) -> Self {
        let q = self.orth_complement();
        let n = self.module.rank;
        let bases: Vec<CMatrix> = self
            .module
            .algebra
            .dims()
            .iter()
            .zip(q.blocks())
            .map(|(&d, qb)| {
                let sym = (qb + &qb.adjoint()).scale_real(0.5);
                let e = hermitian_eig(&sym, 1e-8).expect("I - P is Hermitian");
                let mut w = CMatrix::zeros(n * d, n * d);
                for (k, _) in e.values.iter().enumerate().filter(|(_, &v)| v > 0.5) {
                    w.set_column(k, &e.vectors.column(k));
                }
                w
            })
            .collect();
        let generators = (0..n)
            .map(|j| {
                let stacks = bases
                    .iter()
                    .zip(self.module.algebra.dims())
                    .map(|(w, &d)| w.submatrix(0, j * d, n * d, d))
                    .collect();
                ModVector::from_stacks(&self.module, stacks).expect("stack shapes")
            })
            .collect();
        Self {
            module: self.module.clone(),
            generators,
        }
    }

    /// Distance between the projector onto `F^⊥⊥` and the projector onto `F`.
    pub fn biorth_residual(&self) -> f64 {
        let double = self.complement_submodule().orth_complement();
        double.sub(&self.projector()).expect("same module").norm()
    }

    /// Whether `F` coincides with `F^⊥⊥` within `1e-9`.
    pub fn biorth_check(&self) -> bool {
        self.biorth_residual() <= 1e-9
    }

    /// `F_p`: the submodule generated by the localized generators.
    pub fn localize(&self, p: &Seminorm) -> Result<Self> {
        Ok(Self {
            module: self.module.localize(p)?,
            generators: self
                .generators
                .iter()
                .map(|g| g.localize(p))
                .collect::<Result<_>>()?,
        })
    }
}
