//! Randomized verification suites.
//!
//! [`verify_theorem`] checks, on random submodules and maps, that every
//! submodule is an orthogonal summand equal to its biorthogonal complement,
//! that maps are adjointable with complemented kernels and ranges, and that
//! polar decompositions and generalized inverses exist. [`lemma_suite`] runs
//! the supporting localization statements, each with a forward check and,
//! where the statement is an equivalence, a corruption that must be detected
//! on exactly the supports that see the corrupted block.
//!
//! Trials are independent and run in parallel; trial `i` draws from
//! `RandGen::for_trial(seed, i)` and results are merged in index order, so a
//! configuration always produces the same report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{AlgElem, BlockAlgebra, Seminorm};
use crate::document::{Document, Payload};
use crate::error::{Error, Result};
use crate::hilbmod::{inner, vec_seminorm, FreeModule, ModVector, Submodule};
use crate::invsys::{corrupt_block, sample_seminorms};
use crate::linalg::{svd, CMatrix, C64};
use crate::opmap::{
    bounded_below_constant, graph_projector, graph_unitary, idempotent_residual,
    kernel_range_projectors, penrose_residuals, pinv_op, polar_op, projection_residual,
    range_projector, ModuleMap,
};
use crate::random::RandGen;

/// Residual recorded for a check that could not be evaluated.
pub const UNEVALUATED: f64 = f64::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    pub dims: Vec<usize>,
    pub max_rank: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl TrialConfig {
    pub fn new(dims: Vec<usize>) -> Self {
        Self {
            dims,
            max_rank: 3,
            trials: 100,
            seed: 0,
            tol: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<BlockAlgebra> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive and finite, got {}",
                self.tol
            )));
        }
        if self.max_rank == 0 {
            return Err(Error::InvalidConfig("max_rank must be at least 1".into()));
        }
        BlockAlgebra::new(self.dims.clone()).map_err(|e| Error::InvalidConfig(e.to_string()))
    }
}

/// Replaceable operations, for checking that the suites can fail.
#[doc(hidden)]
#[derive(Clone, Copy)]
pub struct Hooks {
    pub pinv: fn(&ModuleMap) -> ModuleMap,
}

impl Default for Hooks {
    fn default() -> Self {
        Self { pinv: pinv_op }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionEntry {
    pub condition: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremReport {
    pub config: TrialConfig,
    pub conditions: Vec<ConditionEntry>,
}

impl TheoremReport {
    pub fn total_failures(&self) -> usize {
        self.conditions.iter().map(|c| c.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionEntry> {
        self.conditions.iter().find(|c| c.condition == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaEntry {
    pub lemma: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    /// Whether the lemma has a corruption branch.
    pub falsification: bool,
    /// Trials in which a corruption went undetected or was reported on the wrong supports.
    pub missed_detections: usize,
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaReport {
    pub config: TrialConfig,
    pub lemmas: Vec<LemmaEntry>,
}

impl LemmaReport {
    pub fn total_failures(&self) -> usize {
        self.lemmas.iter().map(|l| l.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn lemma(&self, name: &str) -> Option<&LemmaEntry> {
        self.lemmas.iter().find(|l| l.lemma == name)
    }
}

pub const CONDITIONS: [&str; 8] = [
    "orthogonal-summand",
    "biorthogonal-complement",
    "adjointability",
    "kernel-summand",
    "range-summand",
    "polar-decomposition",
    "generalized-inverse",
    "topological-summand",
];

pub const LEMMAS: [&str; 10] = [
    "idempotent-localization",
    "summand-localization",
    "closed-range-localization",
    "graph-isomorphism",
    "adjoint-localization",
    "graph-summand",
    "bounded-below",
    "generalized-inverse",
    "element-generalized-inverse",
    "generalized-inverse-localization",
];

fn clean(r: f64) -> f64 {
    if r.is_nan() {
        UNEVALUATED
    } else {
        r.min(UNEVALUATED)
    }
}

fn eval(r: Result<f64>) -> f64 {
    r.map(clean).unwrap_or(UNEVALUATED)
}

fn doc_value(p: Payload) -> Value {
    Document::new(p).to_value()
}

/// Random inputs of one trial.
struct TrialInputs {
    submodule: Submodule,
    map: ModuleMap,
    endo: ModuleMap,
    element: AlgElem,
    x: ModVector,
    y: ModVector,
    block: usize,
}

impl TrialInputs {
    fn draw(algebra: &BlockAlgebra, cfg: &TrialConfig, trial: usize) -> Self {
        let mut g = RandGen::for_trial(cfg.seed, trial as u64);
        let rank = g.int_in(1, cfg.max_rank);
        let submodule = g.submodule(&FreeModule::new(algebra.clone(), rank));
        let map = g.random_operator(algebra, cfg.max_rank);
        let endo = g.operator(map.codomain(), map.codomain());
        let mut element = g.element(algebra);
        for b in 0..algebra.num_blocks() {
            if g.coin(0.5) {
                element = rank_deficient(&element, b);
            }
        }
        let x = g.vector(map.domain());
        let y = g.vector(map.codomain());
        let block = g.int_in(0, algebra.num_blocks() - 1);
        Self {
            submodule,
            map,
            endo,
            element,
            x,
            y,
            block,
        }
    }

    fn witness(&self, cfg: &TrialConfig, trial: usize) -> Value {
        json!({
            "seed": cfg.seed,
            "trial": trial,
            "map": doc_value(Payload::Map(self.map.clone())),
            "submodule": doc_value(Payload::Submodule(self.submodule.clone())),
            "element": doc_value(Payload::Element(self.element.clone())),
        })
    }
}

/// Zeroes the last column of block `b`.
fn rank_deficient(a: &AlgElem, b: usize) -> AlgElem {
    let mut blocks = a.blocks().to_vec();
    let d = blocks[b].cols();
    blocks[b].set_column(d - 1, &vec![C64::new(0.0, 0.0); d]);
    AlgElem::from_blocks(blocks).expect("shapes unchanged")
}

fn map_diff(a: &ModuleMap, b: &ModuleMap) -> Result<f64> {
    Ok(a.sub(b)?.norm())
}

fn vec_diff(a: &ModVector, b: &ModVector) -> Result<f64> {
    Ok(a.sub(b)?.max_abs())
}

fn pairing_residual(t: &ModuleMap, s: &ModuleMap, x: &ModVector, y: &ModVector) -> Result<f64> {
    Ok(inner(&t.apply(x)?, y)?
        .sub(&inner(x, &s.apply(y)?)?)?
        .max_abs())
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values
        .into_iter()
        .try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

/// An idempotent with the same range as the projection `p`, usually not selfadjoint.
fn oblique_idempotent(p: &ModuleMap, y: &ModuleMap) -> Result<ModuleMap> {
    let complement = ModuleMap::identity(p.domain()).sub(p)?;
    p.add(&p.compose(y)?.compose(&complement)?)
}

fn theorem_residuals(t: &TrialInputs, hooks: &Hooks) -> [f64; 8] {
    let f = &t.submodule;
    let map = &t.map;
    let proj = f.projector();
    let module = f.module();

    let orthogonal = (|| {
        let q = f.orth_complement();
        let mut r = projection_residual(&proj)?;
        for g in f.generators() {
            r = r.max(vec_diff(&proj.apply(g)?, g)?);
        }
        let mut gen = RandGen::new(t.block as u64);
        let (u, v) = (gen.vector(module), gen.vector(module));
        r = r.max(inner(&proj.apply(&u)?, &q.apply(&v)?)?.max_abs());
        Ok(r)
    })();

    let adjointable = (|| {
        let adj = map.adjoint();
        let mut r = pairing_residual(map, &adj, &t.x, &t.y)?;
        let raw = map.to_raw();
        r = r.max(match raw.recognize() {
            Ok(rec) => map_diff(&rec, map)?,
            Err(_) => UNEVALUATED,
        });
        r = r.max(vec_diff(&raw.apply(&t.x)?, &map.apply(&t.x)?)?);
        Ok(r)
    })();

    let (p_ker, p_ran) = kernel_range_projectors(map);
    let kernel = (|| Ok(projection_residual(&p_ker)?.max(map.compose(&p_ker)?.norm())))();
    let range = (|| Ok(projection_residual(&p_ran)?.max(map_diff(&p_ran.compose(map)?, map)?)))();
    let polar = polar_op(map).residuals(map).map(|r| r.max());
    let ginv = penrose_residuals(map, &(hooks.pinv)(map)).map(max_residual);

    let topological = (|| {
        let mut gen = RandGen::new(t.block as u64 + 1);
        let y = gen.operator(module, module);
        let mut r = 0.0f64;
        for e in [proj.clone(), oblique_idempotent(&proj, &y)?] {
            r = r.max(idempotent_residual(&e)?);
            for g in f.generators() {
                r = r.max(vec_diff(&e.apply(g)?, g)?);
            }
            // Ran(E) ⊆ F
            r = r.max(map_diff(&proj.compose(&e)?, &e)?);
        }
        Ok(r)
    })();

    [
        eval(orthogonal),
        clean(f.biorth_residual()),
        eval(adjointable),
        eval(kernel),
        eval(range),
        eval(polar),
        eval(ginv),
        eval(topological),
    ]
}

/// Aggregated outcome of one named check across trials.
struct Tally {
    trials: usize,
    failures: usize,
    missed: usize,
    worst: f64,
    witness: Option<Value>,
}

fn tally(outcomes: &[(f64, bool, Option<Value>)], tol: f64) -> Tally {
    let mut t = Tally {
        trials: outcomes.len(),
        failures: 0,
        missed: 0,
        worst: 0.0,
        witness: None,
    };
    for (r, detected, w) in outcomes {
        t.worst = t.worst.max(*r);
        if !detected {
            t.missed += 1;
        }
        if *r > tol || !detected {
            t.failures += 1;
            if t.witness.is_none() {
                t.witness = w.clone();
            }
        }
    }
    t
}

pub fn verify_theorem(cfg: &TrialConfig) -> Result<TheoremReport> {
    verify_theorem_with(cfg, &Hooks::default())
}

#[doc(hidden)]
pub fn verify_theorem_with(cfg: &TrialConfig, hooks: &Hooks) -> Result<TheoremReport> {
    let algebra = cfg.validate()?;
    let per_trial: Vec<(TrialInputs, [f64; 8])> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let inputs = TrialInputs::draw(&algebra, cfg, i);
            let r = theorem_residuals(&inputs, hooks);
            (inputs, r)
        })
        .collect();
    let conditions = CONDITIONS
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let outcomes: Vec<_> = per_trial
                .iter()
                .enumerate()
                .map(|(i, (inputs, r))| {
                    let w = (r[c] > cfg.tol).then(|| inputs.witness(cfg, i));
                    (r[c], true, w)
                })
                .collect();
            let t = tally(&outcomes, cfg.tol);
            ConditionEntry {
                condition: name.to_string(),
                trials: t.trials,
                failures: t.failures,
                worst_residual: t.worst,
                witness: t.witness,
            }
        })
        .collect();
    Ok(TheoremReport {
        config: cfg.clone(),
        conditions,
    })
}

/// Forward residual and whether the corruption branch behaved (true when there is none).
type LemmaOutcome = (f64, bool);

/// Whether `check` exceeds `tol` on exactly the supports containing `block`.
fn detects(
    seminorms: &[Seminorm],
    block: usize,
    tol: f64,
    check: impl Fn(&Seminorm) -> Result<f64>,
) -> bool {
    seminorms.iter().all(|p| match check(p) {
        Ok(r) => (r > tol) == p.support().contains(&block),
        Err(_) => false,
    })
}

/// Shared data for the lemma checks of one trial.
struct LemmaCtx<'a> {
    t: &'a TrialInputs,
    sems: &'a [Seminorm],
    tol: f64,
    adj: ModuleMap,
    pinv: ModuleMap,
    p_ran: ModuleMap,
}

impl LemmaCtx<'_> {
    fn over_sems(&self, f: impl Fn(&Seminorm) -> Result<f64>) -> f64 {
        eval(max_of(self.sems.iter().map(f)))
    }

    fn detects(&self, check: impl Fn(&Seminorm) -> Result<f64>) -> bool {
        detects(self.sems, self.t.block, self.tol, check)
    }

    fn idempotent(&self) -> Result<LemmaOutcome> {
        let q = oblique_idempotent(&self.p_ran, &self.t.endo)?;
        let fwd = self.over_sems(|p| {
            Ok(idempotent_residual(&q.localize(p)?)?
                .max(projection_residual(&self.p_ran.localize(p)?)?))
        });
        let q_bad = corrupt_block(&q, self.t.block);
        let p_bad = corrupt_block(&self.p_ran, self.t.block);
        let ok = self.detects(|p| idempotent_residual(&q_bad.localize(p)?))
            && self.detects(|p| projection_residual(&p_bad.localize(p)?));
        Ok((fwd, ok))
    }

    fn summand(&self) -> Result<LemmaOutcome> {
        let f = &self.t.submodule;
        let proj = f.projector();
        let fwd = self.over_sems(|p| {
            let fp = f.localize(p)?;
            let local = fp.projector();
            let mut r = map_diff(&proj.localize(p)?, &local)?.max(projection_residual(&local)?);
            for g in fp.generators() {
                r = r.max(vec_diff(&local.apply(g)?, g)?);
            }
            Ok(r)
        });
        let bad = corrupt_block(&proj, self.t.block);
        Ok((
            fwd,
            self.detects(|p| projection_residual(&bad.localize(p)?)),
        ))
    }

    fn closed_range(&self) -> Result<LemmaOutcome> {
        let map = &self.t.map;
        let fwd = self.over_sems(|p| {
            let tp = map.localize(p)?;
            let pp = self.p_ran.localize(p)?;
            let mut r =
                map_diff(&pp.compose(&tp)?, &tp)?.max(map_diff(&pp, &range_projector(&tp))?);
            let bb = bounded_below_constant(map, p)?;
            if !bb.degenerate && bb.c <= 0.0 {
                r = UNEVALUATED;
            }
            Ok(r)
        });
        let bad = corrupt_block(&self.p_ran, self.t.block);
        Ok((
            fwd,
            self.detects(|p| projection_residual(&bad.localize(p)?)),
        ))
    }

    fn graph_isomorphism(&self) -> Result<LemmaOutcome> {
        let (map, x) = (&self.t.map, &self.t.x);
        let pair = x.pair(&map.apply(x)?)?;
        let fwd = self.over_sems(|p| {
            let gu = graph_unitary(map, p)?;
            let xp = x.localize(p)?;
            let image = xp.pair(&map.localize(p)?.apply(&xp)?)?;
            let moved = vec_diff(&gu.u.apply(&pair.localize(p)?)?, &image)?;
            Ok(gu.source_residual.max(gu.target_residual).max(moved))
        });
        Ok((fwd, true))
    }

    fn adjoint(&self) -> Result<LemmaOutcome> {
        let (map, x, y) = (&self.t.map, &self.t.x, &self.t.y);
        let fwd = self.over_sems(|p| {
            let tp = map.localize(p)?;
            let sp = self.adj.localize(p)?;
            Ok(map_diff(&sp, &tp.adjoint())?.max(pairing_residual(
                &tp,
                &sp,
                &x.localize(p)?,
                &y.localize(p)?,
            )?))
        });
        let bad = corrupt_block(&self.adj, self.t.block);
        let ok = self.detects(|p| {
            pairing_residual(
                &map.localize(p)?,
                &bad.localize(p)?,
                &x.localize(p)?,
                &y.localize(p)?,
            )
        });
        Ok((fwd, ok))
    }

    fn graph_summand(&self) -> Result<LemmaOutcome> {
        let (map, x, y) = (&self.t.map, &self.t.x, &self.t.y);
        let pg = graph_projector(map);
        let on_graph = x.pair(&map.apply(x)?)?;
        let off_graph = self.adj.apply(y)?.neg().pair(y)?;
        let fwd = projection_residual(&pg)?
            .max(vec_diff(&pg.apply(&on_graph)?, &on_graph)?)
            .max(pg.apply(&off_graph)?.max_abs());
        let bad = corrupt_block(&self.adj, self.t.block);
        let ok = self.detects(|p| {
            let yp = y.localize(p)?;
            let v = bad.localize(p)?.apply(&yp)?.neg().pair(&yp)?;
            Ok(pg.localize(p)?.apply(&v)?.max_abs())
        });
        Ok((clean(fwd), ok))
    }

    /// Forward: `p̄(Tx) ≥ c_p·p̄(x)` on 50 vectors of `Ker(T)^⊥`. Corruption:
    /// `1.01·c_p` fails on the extremal singular vector, so `c_p` is sharp.
    fn bounded_below(&self) -> Result<LemmaOutcome> {
        let map = &self.t.map;
        let mut gen = RandGen::new(self.t.block as u64 + 7);
        let onto_corange = self.pinv.compose(map)?;
        let xs: Vec<ModVector> = (0..50)
            .map(|_| onto_corange.apply(&gen.vector(map.domain())))
            .collect::<Result<_>>()?;
        let mut fwd = 0.0f64;
        let mut sharp = true;
        for p in self.sems {
            let bb = bounded_below_constant(map, p)?;
            for x in &xs {
                fwd = fwd.max(bb.c * vec_seminorm(p, x)? - vec_seminorm(p, &map.apply(x)?)?);
            }
            if !bb.degenerate {
                let x = extremal_vector(map, p, bb.c)?;
                sharp &= 1.01 * bb.c * vec_seminorm(p, &x)? > vec_seminorm(p, &map.apply(&x)?)?;
            }
        }
        Ok((clean(fwd.max(0.0)), sharp))
    }

    fn generalized_inverse(&self) -> Result<LemmaOutcome> {
        let (map, pinv) = (&self.t.map, &self.pinv);
        let mut fwd = max_residual(penrose_residuals(map, pinv)?);
        let x_perp = pinv.compose(map)?.apply(&self.t.x)?;
        fwd = fwd.max(vec_diff(&pinv.apply(&map.apply(&x_perp)?)?, &x_perp)?);
        let w = self.t.y.sub(&self.p_ran.apply(&self.t.y)?)?;
        fwd = fwd.max(pinv.apply(&w)?.max_abs());
        let bad = corrupt_block(pinv, self.t.block);
        let ok = self.detects(|p| {
            Ok(max_residual(penrose_residuals(
                &map.localize(p)?,
                &bad.localize(p)?,
            )?))
        });
        Ok((clean(fwd), ok))
    }

    fn element_inverse(&self) -> Result<LemmaOutcome> {
        let a = &self.t.element;
        let s = a.pinv();
        let aa = a.mul(&s)?;
        let fwd = max_residual(a.penrose_residuals(&s)?)
            .max(aa.star().sub(&aa)?.max_abs())
            .max(aa.mul(&aa)?.sub(&aa)?.max_abs())
            .max(aa.mul(a)?.sub(a)?.max_abs());
        let b = self.t.block;
        let mut blocks = s.blocks().to_vec();
        blocks[b] = &blocks[b] + &CMatrix::identity(blocks[b].rows()).scale_real(0.5);
        let bad = AlgElem::from_blocks(blocks)?;
        let ok = self.detects(|p| {
            Ok(max_residual(
                p.localize(a)?.penrose_residuals(&p.localize(&bad)?)?,
            ))
        });
        Ok((clean(fwd), ok))
    }

    fn inverse_localization(&self) -> Result<LemmaOutcome> {
        let map = &self.t.map;
        let fwd =
            self.over_sems(|p| map_diff(&pinv_op(&map.localize(p)?), &self.pinv.localize(p)?));
        let bad = corrupt_block(&self.pinv, self.t.block);
        let ok = self.detects(|p| map_diff(&pinv_op(&map.localize(p)?), &bad.localize(p)?));
        Ok((fwd, ok))
    }
}

fn max_residual(r: [f64; 4]) -> f64 {
    r.into_iter().fold(0.0, f64::max)
}

fn lemma_outcomes(t: &TrialInputs, sems: &[Seminorm], tol: f64) -> [LemmaOutcome; 10] {
    let pinv = pinv_op(&t.map);
    let ctx = LemmaCtx {
        t,
        sems,
        tol,
        adj: t.map.adjoint(),
        p_ran: t.map.compose(&pinv).expect("shapes agree"),
        pinv,
    };
    [
        ctx.idempotent(),
        ctx.summand(),
        ctx.closed_range(),
        ctx.graph_isomorphism(),
        ctx.adjoint(),
        ctx.graph_summand(),
        ctx.bounded_below(),
        ctx.generalized_inverse(),
        ctx.element_inverse(),
        ctx.inverse_localization(),
    ]
    .map(|r| r.unwrap_or((UNEVALUATED, false)))
}

/// A vector supported on the block attaining `c`, along the right singular
/// vector of the smallest nonzero singular value, so that `p̄(Tx) = c·p̄(x)`.
fn extremal_vector(t: &ModuleMap, p: &Seminorm, c: f64) -> Result<ModVector> {
    let domain = t.domain();
    let mut best: Option<(usize, f64, usize)> = None;
    for &b in p.support() {
        let d = svd(t.block(b));
        for (k, &s) in d.sigma.iter().enumerate() {
            let gap = (s - c).abs();
            if s > 0.0 && best.is_none_or(|(_, g, _)| gap < g) {
                best = Some((b, gap, k));
            }
        }
    }
    let (b, _, k) = best.ok_or_else(|| Error::ShapeMismatch("no nonzero singular value".into()))?;
    let v = svd(t.block(b)).v.column(k);
    let stacks = domain
        .algebra()
        .dims()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut s = CMatrix::zeros(domain.rank() * d, d);
            if i == b {
                s.set_column(0, &v);
            }
            s
        })
        .collect();
    ModVector::from_stacks(domain, stacks)
}

pub fn lemma_suite(cfg: &TrialConfig) -> Result<LemmaReport> {
    let algebra = cfg.validate()?;
    let sems = sample_seminorms(&algebra, cfg.seed);
    let per_trial: Vec<(TrialInputs, [LemmaOutcome; 10])> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let inputs = TrialInputs::draw(&algebra, cfg, i);
            let r = lemma_outcomes(&inputs, &sems, cfg.tol);
            (inputs, r)
        })
        .collect();
    let lemmas = LEMMAS
        .iter()
        .enumerate()
        .map(|(l, name)| {
            let outcomes: Vec<_> = per_trial
                .iter()
                .enumerate()
                .map(|(i, (inputs, r))| {
                    let (res, ok) = r[l];
                    let w = (res > cfg.tol || !ok).then(|| inputs.witness(cfg, i));
                    (res, ok, w)
                })
                .collect();
            let t = tally(&outcomes, cfg.tol);
            LemmaEntry {
                lemma: name.to_string(),
                trials: t.trials,
                failures: t.failures,
                worst_residual: t.worst,
                falsification: *name != "graph-isomorphism",
                missed_detections: t.missed,
                witness: t.witness,
            }
        })
        .collect();
    Ok(LemmaReport {
        config: cfg.clone(),
        lemmas,
    })
}
