//! Localization of operators along the seminorm lattice and the checks that
//! operator constructions commute with it.

use serde::{Deserialize, Serialize};

use crate::algebra::{BlockAlgebra, Seminorm};
use crate::error::{Error, Result};
use crate::hilbmod::FreeModule;
use crate::linalg::{CMatrix, C64};
use crate::opmap::{
    idempotent_residual, op_predicates, pinv_op, polar_op, projection_residual, range_projector,
    ModuleMap, OpFlags,
};
use crate::random::RandGen;

/// Absolute tolerance for every law in [`commutation_suite`].
pub const COMMUTATION_TOL: f64 = 1e-9;

/// `(π_p)_*(T)` together with the seminorm it was localized at.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedOp {
    pub seminorm: Seminorm,
    pub map: ModuleMap,
}

pub fn localize_op(p: &Seminorm, t: &ModuleMap) -> Result<LocalizedOp> {
    Ok(LocalizedOp {
        seminorm: p.clone(),
        map: t.localize(p)?,
    })
}

/// `(π_pq)_*(T_p)` for `q ≤ p`.
pub fn connect_op(p: &Seminorm, q: &Seminorm, tp: &LocalizedOp) -> Result<LocalizedOp> {
    if tp.seminorm != *p {
        return Err(Error::NotComparable {
            upper: p.support().to_vec(),
            lower: tp.seminorm.support().to_vec(),
        });
    }
    Ok(LocalizedOp {
        seminorm: q.clone(),
        map: tp.map.connect(p, q)?,
    })
}

/// The seminorms a suite quantifies over: every support when there are at
/// most four blocks; otherwise eight seeded random supports together with
/// the full and singleton supports.
pub fn sample_seminorms(algebra: &BlockAlgebra, seed: u64) -> Vec<Seminorm> {
    let k = algebra.num_blocks();
    if k <= 4 {
        return algebra.all_seminorms();
    }
    let mut out = vec![algebra.full_seminorm()];
    out.extend((0..k).map(|i| algebra.seminorm(&[i]).expect("index in range")));
    let mut g = RandGen::new(seed);
    for _ in 0..8 {
        let support: Vec<usize> = (0..k).filter(|_| g.coin(0.5)).collect();
        out.push(algebra.seminorm(&support).expect("indices in range"));
    }
    out
}

/// Breaks `t` in block `b` only: square blocks get `+½·I` (an idempotent stops
/// being one), other blocks get `+½` in every entry.
pub fn corrupt_block(t: &ModuleMap, b: usize) -> ModuleMap {
    let blocks = t
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, blk)| {
            if i != b {
                blk.clone()
            } else if blk.is_square() {
                blk + &CMatrix::identity(blk.rows()).scale_real(0.5)
            } else {
                blk + &CMatrix::from_fn(blk.rows(), blk.cols(), |_, _| C64::new(0.5, 0.0))
            }
        })
        .collect();
    ModuleMap::from_blocks(t.domain(), t.codomain(), blocks).expect("shapes unchanged")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawEntry {
    pub law: String,
    pub seminorm: Vec<usize>,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutationReport {
    pub entries: Vec<LawEntry>,
}

impl CommutationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    /// Worst residual recorded for `law`, or `None` if the law never ran.
    pub fn worst(&self, law: &str) -> Option<f64> {
        self.entries
            .iter()
            .filter(|e| e.law == law)
            .map(|e| e.residual)
            .reduce(f64::max)
    }

    pub fn laws(&self) -> Vec<&str> {
        let mut laws: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !laws.contains(&e.law.as_str()) {
                laws.push(&e.law);
            }
        }
        laws
    }
}

fn entry(law: &str, p: &Seminorm, residual: f64) -> LawEntry {
    LawEntry {
        law: law.to_string(),
        seminorm: p.support().to_vec(),
        residual,
        pass: residual <= COMMUTATION_TOL,
    }
}

fn diff(a: &ModuleMap, b: &ModuleMap) -> Result<f64> {
    Ok(a.sub(b)?.norm())
}

/// One `projection-transfer` entry per seminorm: the residual of
/// `(π_p)_*(P)` being a projection.
pub fn projection_transfer(candidate: &ModuleMap, seminorms: &[Seminorm]) -> Result<Vec<LawEntry>> {
    seminorms
        .iter()
        .map(|p| {
            Ok(entry(
                "projection-transfer",
                p,
                projection_residual(&candidate.localize(p)?)?,
            ))
        })
        .collect()
}

/// Global operator flags next to the flags of every localization.
#[derive(Debug, Clone, PartialEq)]
pub struct PredicateTransfer {
    pub global: OpFlags,
    pub local: Vec<(Vec<usize>, OpFlags)>,
}

impl PredicateTransfer {
    /// Whether each global flag equals the conjunction of the local ones.
    /// Meaningful when the seminorms cover every block.
    pub fn consistent(&self) -> bool {
        let all = |f: fn(&OpFlags) -> bool| self.local.iter().all(|(_, l)| f(l));
        let g = &self.global;
        g.idempotent == all(|f| f.idempotent)
            && g.projection == all(|f| f.projection)
            && g.unitary == all(|f| f.unitary)
            && g.partial_isometry == all(|f| f.partial_isometry)
            && g.selfadjoint == all(|f| f.selfadjoint)
            && g.positive == all(|f| f.positive)
    }
}

pub fn predicate_transfer(
    t: &ModuleMap,
    seminorms: &[Seminorm],
    tol: f64,
) -> Result<PredicateTransfer> {
    let global = op_predicates(t, tol)?;
    let local = seminorms
        .iter()
        .map(|p| Ok((p.support().to_vec(), op_predicates(&t.localize(p)?, tol)?)))
        .collect::<Result<_>>()?;
    Ok(PredicateTransfer { global, local })
}

/// Checks that adjoints, pseudoinverses, polar parts, range projectors and
/// the module action commute with localization at every seminorm in
/// `seminorms`, and that projection and idempotent predicates transfer in
/// both directions. Failures are entries with `pass = false`.
///
/// The reverse direction is exercised by corrupting `TT†` in one seeded block:
/// the `perturbation` law passes when exactly the supports containing that
/// block see a non-projection.
pub fn commutation_suite(
    t: &ModuleMap,
    seminorms: &[Seminorm],
    trials: usize,
    seed: u64,
) -> Result<CommutationReport> {
    for p in seminorms {
        t.algebra().check_same(&p.algebra())?;
    }
    let mut g = RandGen::new(seed);
    let adj = t.adjoint();
    let pinv = pinv_op(t);
    let polar = polar_op(t);
    let proj = range_projector(t);
    let codomain: &FreeModule = t.codomain();
    let one = ModuleMap::identity(codomain);
    let complement = one.sub(&proj)?;

    let xs: Vec<_> = (0..trials).map(|_| g.vector(t.domain())).collect();
    let idempotents = (0..trials.max(1))
        .map(|_| {
            let y = g.operator(codomain, codomain);
            proj.add(&proj.compose(&y)?.compose(&complement)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let k = t.algebra().num_blocks();
    let corrupted = (k > 0).then(|| {
        let b = g.int_in(0, k - 1);
        (b, corrupt_block(&proj, b))
    });

    let mut entries = Vec::new();
    for p in seminorms {
        let tp = t.localize(p)?;
        entries.push(entry("adjoint", p, diff(&adj.localize(p)?, &tp.adjoint())?));
        entries.push(entry(
            "pseudoinverse",
            p,
            diff(&pinv.localize(p)?, &pinv_op(&tp))?,
        ));

        let local_polar = polar_op(&tp);
        let polar_res = diff(&polar.v.localize(p)?, &local_polar.v)?
            .max(diff(&polar.abs.localize(p)?, &local_polar.abs)?)
            .max(local_polar.residuals(&tp)?.max());
        entries.push(entry("polar", p, polar_res));

        let proj_p = proj.localize(p)?;
        entries.push(entry(
            "range-projector",
            p,
            diff(&proj_p, &range_projector(&tp))?,
        ));
        entries.push(entry(
            "projection-transfer",
            p,
            projection_residual(&proj_p)?,
        ));

        let mut idem = 0.0f64;
        for q in &idempotents {
            idem = idem.max(idempotent_residual(&q.localize(p)?)?);
        }
        entries.push(entry("idempotent-transfer", p, idem));

        let mut action = 0.0f64;
        for x in &xs {
            let lhs = t.apply(x)?.localize(p)?;
            let rhs = tp.apply(&x.localize(p)?)?;
            action = action.max(lhs.sub(&rhs)?.max_abs());
        }
        entries.push(entry("action", p, action));

        if let Some((b, bad)) = &corrupted {
            let r = projection_residual(&bad.localize(p)?)?;
            let detected = r > COMMUTATION_TOL;
            let expected = p.support().contains(b);
            entries.push(LawEntry {
                law: "perturbation".to_string(),
                seminorm: p.support().to_vec(),
                residual: r,
                pass: detected == expected,
            });
        }
    }
    Ok(CommutationReport { entries })
}
