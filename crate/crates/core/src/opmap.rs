//! Bounded adjointable module maps `Aⁿ → Aᵐ`.
//!
//! A [`ModuleMap`] is an `m×n` matrix over the algebra. It is stored through
//! its left-multiplication realization: in block `b` (size `d`) the map acts
//! on the `(n·d)×d` coordinate stack by an `(m·d)×(n·d)` complex matrix whose
//! `d×d` sub-blocks are the `b`-th blocks of the entries. Pseudoinverses,
//! square roots and norms of a left-multiplication operator are left
//! multiplications by the corresponding blockwise matrices, so all numerics
//! happen on these block matrices.

use crate::algebra::{AlgElem, BlockAlgebra, Seminorm};
use crate::error::{Error, Result};
use crate::hilbmod::{FreeModule, ModVector};
use crate::linalg::{
    column_space_projector, hermitian_eig, mat_pinv, psd_sqrt, rank_cutoff, svd, CMatrix, C64,
    DEFAULT_RANK_RTOL,
};

/// Eigenvalues of `T*T` at or below this fraction of `‖T*T‖_F` are clamped to
/// zero before taking the square root for `|T|`.
pub const ABS_CLAMP_RTOL: f64 = 1e-12;

/// Comparison tolerance for operator identities involving `t`: `1e-9·(1 + ‖t‖)`.
pub fn default_tol(t: &ModuleMap) -> f64 {
    1e-9 * (1.0 + t.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMap {
    domain: FreeModule,
    codomain: FreeModule,
    blocks: Vec<CMatrix>,
}

impl ModuleMap {
    pub fn from_blocks(
        domain: &FreeModule,
        codomain: &FreeModule,
        blocks: Vec<CMatrix>,
    ) -> Result<Self> {
        domain.algebra().check_same(codomain.algebra())?;
        let dims = domain.algebra().dims();
        if blocks.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks supplied for an algebra with {} blocks",
                blocks.len(),
                dims.len()
            )));
        }
        for (b, (blk, &d)) in blocks.iter().zip(dims).enumerate() {
            let want = (codomain.rank() * d, domain.rank() * d);
            if blk.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "block {b} is {}x{}, expected {}x{}",
                    blk.rows(),
                    blk.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            blocks,
        })
    }

    /// Builds the map `(Tx)_i = Σ_j entries[i][j]·x_j` from an `m×n` table.
    pub fn from_entries(
        domain: &FreeModule,
        codomain: &FreeModule,
        entries: &[Vec<AlgElem>],
    ) -> Result<Self> {
        domain.algebra().check_same(codomain.algebra())?;
        let (m, n) = (codomain.rank(), domain.rank());
        if entries.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{} entry rows, expected {m}",
                entries.len()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "entry row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for e in row {
                domain.algebra().check_same(&e.algebra())?;
            }
        }
        let blocks = domain
            .algebra()
            .dims()
            .iter()
            .enumerate()
            .map(|(b, &d)| {
                let mut blk = CMatrix::zeros(m * d, n * d);
                for (i, row) in entries.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        blk.set_submatrix(i * d, j * d, e.block(b));
                    }
                }
                blk
            })
            .collect();
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            blocks,
        })
    }

    pub fn identity(module: &FreeModule) -> Self {
        let blocks = (0..module.algebra().num_blocks())
            .map(|b| CMatrix::identity(module.stack_rows(b)))
            .collect();
        Self {
            domain: module.clone(),
            codomain: module.clone(),
            blocks,
        }
    }

    pub fn zero(domain: &FreeModule, codomain: &FreeModule) -> Self {
        let blocks = (0..domain.algebra().num_blocks())
            .map(|b| CMatrix::zeros(codomain.stack_rows(b), domain.stack_rows(b)))
            .collect();
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            blocks,
        }
    }

    pub fn domain(&self) -> &FreeModule {
        &self.domain
    }

    pub fn codomain(&self) -> &FreeModule {
        &self.codomain
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        self.domain.algebra()
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &CMatrix {
        &self.blocks[b]
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn entry(&self, i: usize, j: usize) -> AlgElem {
        let blocks = self
            .algebra()
            .dims()
            .iter()
            .zip(&self.blocks)
            .map(|(&d, blk)| blk.submatrix(i * d, j * d, d, d))
            .collect();
        AlgElem::new(self.algebra(), blocks).expect("entry blocks are square")
    }

    pub fn entries(&self) -> Vec<Vec<AlgElem>> {
        (0..self.codomain.rank())
            .map(|i| (0..self.domain.rank()).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn apply(&self, x: &ModVector) -> Result<ModVector> {
        self.domain.check_same(x.module())?;
        let stacks = self
            .blocks
            .iter()
            .zip(x.stacks())
            .map(|(t, s)| t * s)
            .collect();
        ModVector::from_stacks(&self.codomain, stacks)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        other.codomain.check_same(&self.domain).map_err(|_| {
            Error::ShapeMismatch(format!(
                "cannot compose a map out of rank {} after a map into rank {}",
                self.domain.rank(),
                other.codomain.rank()
            ))
        })?;
        Ok(Self {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::ShapeMismatch(format!(
                "maps {}→{} and {}→{} differ in shape",
                self.domain.rank(),
                self.codomain.rank(),
                other.domain.rank(),
                other.codomain.rank()
            )));
        }
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
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

    pub fn scale(&self, c: C64) -> Self {
        Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    /// `T*`, characterized by `⟨Tx, y⟩ = ⟨x, T*y⟩`: entry `(j, i)` is `entries[i][j]*`.
    pub fn adjoint(&self) -> Self {
        Self {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            blocks: self.blocks.iter().map(CMatrix::adjoint).collect(),
        }
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(CMatrix::norm2).fold(0.0, f64::max)
    }

    /// `p̃(T) = ‖(π_p)_*(T)‖`.
    pub fn seminorm(&self, p: &Seminorm) -> Result<f64> {
        p.check_algebra(self.algebra())?;
        Ok(p.support()
            .iter()
            .map(|&b| self.blocks[b].norm2())
            .fold(0.0, f64::max))
    }

    /// A constant `K_p` with `p̄(Tx) ≤ K_p·p̄(x)`; the seminorm itself is the best one.
    pub fn bound_constant(&self, p: &Seminorm) -> Result<f64> {
        self.seminorm(p)
    }

    /// `(π_p)_*(T)`.
    pub fn localize(&self, p: &Seminorm) -> Result<Self> {
        Ok(Self {
            domain: self.domain.localize(p)?,
            codomain: self.codomain.localize(p)?,
            blocks: p
                .support()
                .iter()
                .map(|&b| self.blocks[b].clone())
                .collect(),
        })
    }

    /// `(π_pq)_*(T_p)` for `q ≤ p`, where `self` lives over `A_p`.
    pub fn connect(&self, p: &Seminorm, q: &Seminorm) -> Result<Self> {
        let positions = p.connect_positions(q)?;
        p.quotient_algebra().check_same(self.algebra())?;
        let alg = q.quotient_algebra();
        Ok(Self {
            domain: FreeModule::new(alg.clone(), self.domain.rank()),
            codomain: FreeModule::new(alg, self.codomain.rank()),
            blocks: positions.iter().map(|&j| self.blocks[j].clone()).collect(),
        })
    }

    /// The general linear realization: `I_d ⊗ T_b` acting on column-major vec of the stacks.
    pub fn to_raw(&self) -> RawLinearMap {
        RawLinearMap {
            algebra: self.algebra().clone(),
            domain_rank: self.domain.rank(),
            codomain_rank: self.codomain.rank(),
            blocks: self
                .algebra()
                .dims()
                .iter()
                .zip(&self.blocks)
                .map(|(&d, t)| CMatrix::identity(d).kron(t))
                .collect(),
        }
    }

    fn map_blocks(
        &self,
        domain: &FreeModule,
        codomain: &FreeModule,
        f: impl Fn(&CMatrix) -> CMatrix,
    ) -> Self {
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }
}

/// An arbitrary complex-linear map between the block realizations of `Aⁿ` and `Aᵐ`.
///
/// Block `b` (size `d`) is an `(m·d²)×(n·d²)` matrix acting on the column-major
/// vectorization of the `(n·d)×d` coordinate stack. Such a map need not respect
/// the right module action; [`RawLinearMap::recognize`] decides whether it does.
#[derive(Debug, Clone, PartialEq)]
pub struct RawLinearMap {
    algebra: BlockAlgebra,
    domain_rank: usize,
    codomain_rank: usize,
    blocks: Vec<CMatrix>,
}

impl RawLinearMap {
    pub fn new(
        algebra: &BlockAlgebra,
        domain_rank: usize,
        codomain_rank: usize,
        blocks: Vec<CMatrix>,
    ) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::DimensionMismatch(format!(
                "{} raw blocks supplied for an algebra with {} blocks",
                blocks.len(),
                algebra.num_blocks()
            )));
        }
        for (b, (blk, &d)) in blocks.iter().zip(algebra.dims()).enumerate() {
            let want = (codomain_rank * d * d, domain_rank * d * d);
            if blk.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "raw block {b} is {}x{}, expected {}x{}",
                    blk.rows(),
                    blk.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Self {
            algebra: algebra.clone(),
            domain_rank,
            codomain_rank,
            blocks,
        })
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn domain_rank(&self) -> usize {
        self.domain_rank
    }

    pub fn codomain_rank(&self) -> usize {
        self.codomain_rank
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn apply(&self, x: &ModVector) -> Result<ModVector> {
        let domain = FreeModule::new(self.algebra.clone(), self.domain_rank);
        domain.check_same(x.module())?;
        let codomain = FreeModule::new(self.algebra.clone(), self.codomain_rank);
        let stacks = self
            .blocks
            .iter()
            .zip(x.stacks())
            .zip(self.algebra.dims())
            .map(|((raw, s), &d)| {
                let v = CMatrix::from_fn(s.rows() * d, 1, |k, _| s[(k % s.rows(), k / s.rows())]);
                let w = raw * &v;
                let rows = self.codomain_rank * d;
                CMatrix::from_fn(rows, d, |i, j| w[(j * rows + i, 0)])
            })
            .collect();
        ModVector::from_stacks(&codomain, stacks)
    }

    /// Largest commutator residual of block `b` against right multiplication
    /// by the matrix unit `E(row, col)`.
    pub fn unit_residual(&self, b: usize, row: usize, col: usize) -> f64 {
        let d = self.algebra.dims()[b];
        let unit_t = CMatrix::from_fn(d, d, |i, j| {
            if i == col && j == row {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        // vec(X·E) = (Eᵀ ⊗ I) vec(X)
        let right_in = unit_t.kron(&CMatrix::identity(self.domain_rank * d));
        let right_out = unit_t.kron(&CMatrix::identity(self.codomain_rank * d));
        let raw = &self.blocks[b];
        (&(raw * &right_in) - &(&right_out * raw)).max_abs()
    }

    /// Module-map recognition: succeeds iff every block commutes with right
    /// multiplication by every matrix unit, in which case the block is
    /// `I_d ⊗ T_b` and `T_b` is read off its leading diagonal block.
    pub fn recognize(&self) -> Result<ModuleMap> {
        for (b, &d) in self.algebra.dims().iter().enumerate() {
            let tol = 1e-10 * (1.0 + self.blocks[b].max_abs());
            for row in 0..d {
                for col in 0..d {
                    let residual = self.unit_residual(b, row, col);
                    if residual > tol {
                        return Err(Error::NotAModuleMap {
                            block: b,
                            row,
                            col,
                            residual,
                        });
                    }
                }
            }
        }
        let domain = FreeModule::new(self.algebra.clone(), self.domain_rank);
        let codomain = FreeModule::new(self.algebra.clone(), self.codomain_rank);
        let blocks = self
            .blocks
            .iter()
            .zip(self.algebra.dims())
            .map(|(raw, &d)| raw.submatrix(0, 0, self.codomain_rank * d, self.domain_rank * d))
            .collect();
        ModuleMap::from_blocks(&domain, &codomain, blocks)
    }
}

/// Moore–Penrose inverse `T†`, computed blockwise.
pub fn pinv_op(t: &ModuleMap) -> ModuleMap {
    t.map_blocks(&t.codomain, &t.domain, |b| mat_pinv(b, DEFAULT_RANK_RTOL))
}

/// `[‖TST − T‖, ‖STS − S‖, ‖(TS)* − TS‖, ‖(ST)* − ST‖]`.
pub fn penrose_residuals(t: &ModuleMap, s: &ModuleMap) -> Result<[f64; 4]> {
    if s.domain != t.codomain || s.codomain != t.domain {
        return Err(Error::ShapeMismatch(format!(
            "candidate inverse maps {}→{}, expected {}→{}",
            s.domain.rank(),
            s.codomain.rank(),
            t.codomain.rank(),
            t.domain.rank()
        )));
    }
    let ts = t.compose(s)?;
    let st = s.compose(t)?;
    Ok([
        ts.compose(t)?.sub(t)?.norm(),
        st.compose(s)?.sub(s)?.norm(),
        ts.adjoint().sub(&ts)?.norm(),
        st.adjoint().sub(&st)?.norm(),
    ])
}

/// Orthogonal projection onto `Ran(T)`, as `T T†`.
pub fn range_projector(t: &ModuleMap) -> ModuleMap {
    t.compose(&pinv_op(t)).expect("shapes agree")
}

/// `(I − T†T, T T†)`: projections onto `Ker(T)` and `Ran(T)`.
pub fn kernel_range_projectors(t: &ModuleMap) -> (ModuleMap, ModuleMap) {
    let s = pinv_op(t);
    let p_ker = ModuleMap::identity(&t.domain)
        .sub(&s.compose(t).expect("shapes agree"))
        .expect("shapes agree");
    let p_ran = t.compose(&s).expect("shapes agree");
    (p_ker, p_ran)
}

/// `T = V|T|` with `V` a partial isometry.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarParts {
    pub v: ModuleMap,
    pub abs: ModuleMap,
}

/// Residuals of the polar-decomposition contract.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarResiduals {
    /// `‖T − V|T|‖`
    pub factorization: f64,
    /// `‖VV*V − V‖`
    pub partial_isometry: f64,
    /// `‖V*V − |T||T|†‖`: initial space is the closure of `Ran|T|`.
    pub initial_space: f64,
    /// `‖VV* − TT†‖`: final space is the closure of `Ran T`.
    pub final_space: f64,
    /// `‖(I − V*V) − (I − T†T)‖`: `Ker V = Ker T`.
    pub kernel: f64,
}

impl PolarResiduals {
    pub fn max(&self) -> f64 {
        [
            self.factorization,
            self.partial_isometry,
            self.initial_space,
            self.final_space,
            self.kernel,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl PolarParts {
    pub fn residuals(&self, t: &ModuleMap) -> Result<PolarResiduals> {
        let v = &self.v;
        let vstar = v.adjoint();
        let vsv = vstar.compose(v)?;
        let vvs = v.compose(&vstar)?;
        let (p_ker, p_ran) = kernel_range_projectors(t);
        let one = ModuleMap::identity(&t.domain);
        Ok(PolarResiduals {
            factorization: t.sub(&v.compose(&self.abs)?)?.norm(),
            partial_isometry: vvs.compose(v)?.sub(v)?.norm(),
            initial_space: vsv.sub(&range_projector(&self.abs))?.norm(),
            final_space: vvs.sub(&p_ran)?.norm(),
            kernel: one.sub(&vsv)?.sub(&p_ker)?.norm(),
        })
    }
}

/// `|T| = (T*T)^{1/2}` blockwise.
pub fn abs_op(t: &ModuleMap) -> ModuleMap {
    t.map_blocks(&t.domain, &t.domain, |b| {
        let tt = b.adjoint_mul(b);
        let clamp = ABS_CLAMP_RTOL * tt.frobenius_norm();
        psd_sqrt(&tt, clamp).expect("T*T is Hermitian positive semidefinite")
    })
}

/// Polar decomposition with `V = T·|T|†`.
pub fn polar_op(t: &ModuleMap) -> PolarParts {
    let abs = abs_op(t);
    let v = t.compose(&pinv_op(&abs)).expect("shapes agree");
    PolarParts { v, abs }
}

/// Projection of `E ⊕ F` onto the graph `{(x, Tx)}`: in block `b` the
/// column-space projector of the stacked matrix `[I; T_b]`.
pub fn graph_projector(t: &ModuleMap) -> ModuleMap {
    let sum = t.domain.direct_sum(&t.codomain).expect("same algebra");
    let blocks = t
        .blocks
        .iter()
        .map(|tb| {
            let eye = CMatrix::identity(tb.cols());
            let w = CMatrix::vstack(tb.cols(), &[&eye, tb]);
            column_space_projector(&w, DEFAULT_RANK_RTOL)
        })
        .collect();
    ModuleMap::from_blocks(&sum, &sum, blocks).expect("graph projector shapes")
}

/// The isomorphism `U_p: G(T)_p → G(T_p)`, `(x, Tx)_p ↦ (x_p, T_p x_p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphUnitary {
    /// `U_p`, as a map on `(E ⊕ F)_p` vanishing off `G(T)_p`.
    pub u: ModuleMap,
    /// Projection onto the localized graph `G(T)_p`.
    pub source: ModuleMap,
    /// Projection onto the graph of the localized map `G(T_p)`.
    pub target: ModuleMap,
    /// `‖U*U − source‖`
    pub source_residual: f64,
    /// `‖UU* − target‖`
    pub target_residual: f64,
}

pub fn graph_unitary(t: &ModuleMap, p: &Seminorm) -> Result<GraphUnitary> {
    let source = graph_projector(t).localize(p)?;
    let tp = t.localize(p)?;
    let target = graph_projector(&tp);
    let sum = tp.domain.direct_sum(&tp.codomain)?;
    // (a, b) ↦ (a, T_p a), restricted to the source graph
    let lift_blocks = tp
        .blocks
        .iter()
        .map(|tb| {
            let (m, n) = tb.shape();
            let mut k = CMatrix::zeros(n + m, n + m);
            k.set_submatrix(0, 0, &CMatrix::identity(n));
            k.set_submatrix(n, 0, tb);
            k
        })
        .collect();
    let lift = ModuleMap::from_blocks(&sum, &sum, lift_blocks)?;
    let u = lift.compose(&source)?;
    let ustar = u.adjoint();
    let source_residual = ustar.compose(&u)?.sub(&source)?.norm();
    let target_residual = u.compose(&ustar)?.sub(&target)?.norm();
    Ok(GraphUnitary {
        u,
        source,
        target,
        source_residual,
        target_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedBelow {
    /// Largest `c_p` with `p̄(Tx) ≥ c_p·p̄(x)` on `Ker(T)^⊥`.
    pub c: f64,
    /// Set when `T` vanishes on every support block.
    pub degenerate: bool,
}

/// The minimum over support blocks of the smallest nonzero singular value.
/// Zero blocks are skipped; if every block is zero the result is degenerate.
pub fn bounded_below_constant(t: &ModuleMap, p: &Seminorm) -> Result<BoundedBelow> {
    p.check_algebra(t.algebra())?;
    let mut c = f64::INFINITY;
    for &b in p.support() {
        let blk = &t.blocks[b];
        let sigma = svd(blk).sigma;
        let top = sigma.first().copied().unwrap_or(0.0);
        if top <= 0.0 {
            continue;
        }
        let cutoff = rank_cutoff(top, blk.rows(), blk.cols(), DEFAULT_RANK_RTOL);
        if let Some(&smallest) = sigma.iter().rev().find(|&&s| s > cutoff) {
            c = c.min(smallest);
        }
    }
    Ok(if c.is_finite() {
        BoundedBelow {
            c,
            degenerate: false,
        }
    } else {
        BoundedBelow {
            c: 0.0,
            degenerate: true,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpFlags {
    pub idempotent: bool,
    pub projection: bool,
    pub unitary: bool,
    pub partial_isometry: bool,
    pub selfadjoint: bool,
    pub positive: bool,
}

pub fn idempotent_residual(t: &ModuleMap) -> Result<f64> {
    Ok(t.compose(t)?.sub(t)?.norm())
}

pub fn selfadjoint_residual(t: &ModuleMap) -> Result<f64> {
    Ok(t.adjoint().sub(t)?.norm())
}

/// `max(‖P² − P‖, ‖P* − P‖)`.
pub fn projection_residual(t: &ModuleMap) -> Result<f64> {
    Ok(idempotent_residual(t)?.max(selfadjoint_residual(t)?))
}

/// `max(‖U*U − 1_E‖, ‖UU* − 1_F‖)`; any shape.
pub fn unitary_residual(t: &ModuleMap) -> f64 {
    let u = t.adjoint();
    let a = u
        .compose(t)
        .expect("shapes agree")
        .sub(&ModuleMap::identity(&t.domain))
        .expect("shapes agree");
    let b = t
        .compose(&u)
        .expect("shapes agree")
        .sub(&ModuleMap::identity(&t.codomain))
        .expect("shapes agree");
    a.norm().max(b.norm())
}

/// `‖VV*V − V‖`; any shape.
pub fn partial_isometry_residual(t: &ModuleMap) -> f64 {
    let vvs = t.compose(&t.adjoint()).expect("shapes agree");
    vvs.compose(t)
        .expect("shapes agree")
        .sub(t)
        .expect("shapes agree")
        .norm()
}

/// Operator predicates decided by residual `≤ tol`. Requires an endomorphism.
pub fn op_predicates(t: &ModuleMap, tol: f64) -> Result<OpFlags> {
    if !t.is_endomorphism() {
        return Err(Error::ShapeMismatch(format!(
            "predicates need an endomorphism, got a map {}→{}",
            t.domain.rank(),
            t.codomain.rank()
        )));
    }
    let idempotent = idempotent_residual(t)? <= tol;
    let selfadjoint = selfadjoint_residual(t)? <= tol;
    let positive = selfadjoint
        && t.blocks.iter().all(|b| {
            hermitian_eig(b, tol)
                .map(|e| e.values.last().is_none_or(|&min| min >= -tol))
                .unwrap_or(false)
        });
    Ok(OpFlags {
        idempotent,
        projection: idempotent && selfadjoint,
        unitary: unitary_residual(t) <= tol,
        partial_isometry: partial_isometry_residual(t) <= tol,
        selfadjoint,
        positive,
    })
}
