//! Seeded generators for algebras, vectors, submodules and maps.
//!
//! Every complex entry has independent standard-normal real and imaginary
//! parts, drawn from a ChaCha8 stream. `RandGen::new(seed)` and
//! `RandGen::for_trial(seed, trial)` are fully deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgElem, BlockAlgebra};
use crate::hilbmod::{FreeModule, ModVector, Submodule};
use crate::linalg::{svd, CMatrix, C64};
use crate::opmap::{ModuleMap, RawLinearMap};

#[derive(Debug, Clone)]
pub struct RandGen {
    rng: ChaCha8Rng,
}

impl RandGen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for trial `trial` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Self { rng }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex(&mut self) -> C64 {
        let re = self.normal();
        C64::new(re, self.normal())
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex())
    }

    /// Haar-like unitary from the singular vectors of a Gaussian matrix.
    pub fn unitary(&mut self, n: usize) -> CMatrix {
        let d = svd(&self.matrix(n, n));
        &d.u * &d.v.adjoint()
    }

    pub fn element(&mut self, algebra: &BlockAlgebra) -> AlgElem {
        let blocks = algebra.dims().iter().map(|&d| self.matrix(d, d)).collect();
        AlgElem::new(algebra, blocks).expect("blocks match the algebra")
    }

    pub fn vector(&mut self, module: &FreeModule) -> ModVector {
        let stacks = module
            .algebra()
            .dims()
            .iter()
            .map(|&d| self.matrix(module.rank() * d, d))
            .collect();
        ModVector::from_stacks(module, stacks).expect("stacks match the module")
    }

    /// Gaussian map with independent entries.
    pub fn operator(&mut self, domain: &FreeModule, codomain: &FreeModule) -> ModuleMap {
        let blocks = domain
            .algebra()
            .dims()
            .iter()
            .map(|&d| self.matrix(codomain.rank() * d, domain.rank() * d))
            .collect();
        ModuleMap::from_blocks(domain, codomain, blocks).expect("blocks match the modules")
    }

    /// Product of Gaussian maps through `Aᵏ`; rank-deficient when `k` is small.
    pub fn low_rank_operator(
        &mut self,
        domain: &FreeModule,
        codomain: &FreeModule,
        inner: usize,
    ) -> ModuleMap {
        let mid = FreeModule::new(domain.algebra().clone(), inner);
        let left = self.operator(&mid, codomain);
        let right = self.operator(domain, &mid);
        left.compose(&right).expect("shapes agree")
    }

    /// Map between modules of random rank in `1..=max_rank`; a third of the
    /// draws factor through a smaller module.
    pub fn random_operator(&mut self, algebra: &BlockAlgebra, max_rank: usize) -> ModuleMap {
        let max_rank = max_rank.max(1);
        let n = self.int_in(1, max_rank);
        let m = self.int_in(1, max_rank);
        let domain = FreeModule::new(algebra.clone(), n);
        let codomain = FreeModule::new(algebra.clone(), m);
        if self.coin(1.0 / 3.0) {
            let inner = self.int_in(0, n.min(m).saturating_sub(1));
            self.low_rank_operator(&domain, &codomain, inner)
        } else {
            self.operator(&domain, &codomain)
        }
    }

    /// Submodule with `0..=rank+1` generators. Some generators are right
    /// multiples of earlier ones, so generating sets are often redundant.
    pub fn submodule(&mut self, module: &FreeModule) -> Submodule {
        let count = self.int_in(0, module.rank() + 1);
        let mut generators: Vec<ModVector> = Vec::with_capacity(count);
        for _ in 0..count {
            if !generators.is_empty() && self.coin(0.25) {
                let k = self.int_in(0, generators.len() - 1);
                let a = self.element(module.algebra());
                generators.push(generators[k].right_mul(&a).expect("same algebra"));
            } else {
                generators.push(self.vector(module));
            }
        }
        Submodule::new(module, generators).expect("generators live in the module")
    }

    /// Gaussian raw linear map; almost surely not a module map.
    pub fn raw(
        &mut self,
        algebra: &BlockAlgebra,
        domain_rank: usize,
        codomain_rank: usize,
    ) -> RawLinearMap {
        let blocks = algebra
            .dims()
            .iter()
            .map(|&d| self.matrix(codomain_rank * d * d, domain_rank * d * d))
            .collect();
        RawLinearMap::new(algebra, domain_rank, codomain_rank, blocks).expect("blocks match")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandKind {
    Element,
    Vector,
    Operator,
    Submodule,
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RandValue {
    Element(AlgElem),
    Vector(ModVector),
    Operator(ModuleMap),
    Submodule(Submodule),
    Raw(RawLinearMap),
}

/// One value of the requested kind over `algebra`, module ranks in `1..=max_rank`.
pub fn rand_gen(seed: u64, kind: RandKind, algebra: &BlockAlgebra, max_rank: usize) -> RandValue {
    let mut g = RandGen::new(seed);
    let max_rank = max_rank.max(1);
    match kind {
        RandKind::Element => RandValue::Element(g.element(algebra)),
        RandKind::Vector => {
            let n = g.int_in(1, max_rank);
            RandValue::Vector(g.vector(&FreeModule::new(algebra.clone(), n)))
        }
        RandKind::Operator => RandValue::Operator(g.random_operator(algebra, max_rank)),
        RandKind::Submodule => {
            let n = g.int_in(1, max_rank);
            RandValue::Submodule(g.submodule(&FreeModule::new(algebra.clone(), n)))
        }
        RandKind::Raw => {
            let n = g.int_in(1, max_rank);
            let m = g.int_in(1, max_rank);
            RandValue::Raw(g.raw(algebra, n, m))
        }
    }
}
