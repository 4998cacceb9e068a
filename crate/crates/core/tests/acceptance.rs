//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with `cargo test --test acceptance`.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cstarmod::algebra::BlockAlgebra;
use cstarmod::document::Document;
use cstarmod::harness::{verify_theorem, verify_theorem_with, Hooks, TrialConfig};
use cstarmod::hilbmod::{inner, vec_seminorm, FreeModule};
use cstarmod::invsys::{commutation_suite, corrupt_block, projection_transfer, COMMUTATION_TOL};
use cstarmod::linalg::{CMatrix, C64};
use cstarmod::opmap::{
    bounded_below_constant, graph_projector, graph_unitary, penrose_residuals, pinv_op, polar_op,
    projection_residual, range_projector, ModuleMap, RawLinearMap,
};
use cstarmod::random::RandGen;

use common::{max_diff, min_nonzero_singular_value, regularized_pinv};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn alg(dims: &[usize]) -> BlockAlgebra {
    BlockAlgebra::new(dims.to_vec()).unwrap()
}

/// 1 to 3 blocks of dimension 1 to 3.
fn random_algebra(g: &mut RandGen) -> BlockAlgebra {
    let k = g.int_in(1, 3);
    alg(&(0..k).map(|_| g.int_in(1, 3)).collect::<Vec<_>>())
}

fn penrose() -> Outcome {
    let a = alg(&[1, 2]);
    let (mut worst, mut checked, mut worst_oracle) = (0.0f64, 0usize, 0.0f64);
    for trial in 0..1000 {
        let mut g = RandGen::for_trial(1, trial);
        let t = g.random_operator(&a, 4);
        let s = pinv_op(&t);
        let r = penrose_residuals(&t, &s).unwrap();
        let m = r.into_iter().fold(0.0, f64::max);
        ensure(m <= 1e-8, || format!("trial {trial}: residuals {r:?}"))?;
        worst = worst.max(m);
        for (tb, sb) in t.blocks().iter().zip(s.blocks()) {
            let cutoff = 1e-8 * (1.0 + tb.norm2());
            match min_nonzero_singular_value(tb, cutoff) {
                Some(sigma) if sigma < 0.1 => continue,
                _ => {}
            }
            let d = max_diff(sb, &regularized_pinv(tb, 1e-10));
            ensure(d <= 1e-4, || {
                format!("trial {trial}: oracle differs by {d:.3e}")
            })?;
            worst_oracle = worst_oracle.max(d);
            checked += 1;
        }
    }
    Ok(format!(
        "1000 maps, worst Penrose residual {worst:.2e}; {checked} blocks vs regularized oracle, worst {worst_oracle:.2e}"
    ))
}

fn localization_commutation() -> Outcome {
    let laws = [
        "adjoint",
        "pseudoinverse",
        "polar",
        "projection-transfer",
        "range-projector",
    ];
    let mut worst = 0.0f64;
    let mut flagged = 0usize;
    for (dims, count) in [(&[1usize, 2][..], 4usize), (&[1, 2, 2][..], 8)] {
        let a = alg(dims);
        let sems = a.all_seminorms();
        ensure(sems.len() == count, || {
            format!("{dims:?}: {} supports", sems.len())
        })?;
        for trial in 0..25 {
            let mut g = RandGen::for_trial(2, trial);
            let t = g.random_operator(&a, 3);
            let rep = commutation_suite(&t, &sems, 5, trial).unwrap();
            for law in laws {
                let w = rep.worst(law).ok_or(format!("law {law} missing"))?;
                ensure(w <= COMMUTATION_TOL, || {
                    format!("{dims:?} trial {trial}: {law} residual {w:.3e}")
                })?;
                worst = worst.max(w);
            }
            ensure(rep.all_pass(), || {
                format!("{dims:?} trial {trial}: suite failed")
            })?;
            // corrupt one block of the range projector: exactly the supports
            // containing that block must see a non-projection
            let b = trial as usize % dims.len();
            let bad = corrupt_block(&range_projector(&t), b);
            for (entry, p) in projection_transfer(&bad, &sems).unwrap().iter().zip(&sems) {
                let expected_fail = p.support().contains(&b);
                ensure(entry.pass != expected_fail, || {
                    format!(
                        "{dims:?}: corruption of block {b} misreported on {:?}",
                        p.support()
                    )
                })?;
                flagged += usize::from(!entry.pass);
            }
        }
    }
    Ok(format!(
        "50 maps over all 4 + 8 supports, worst {worst:.2e}; corruption flagged on {flagged} supports as expected"
    ))
}

fn graph_theorem() -> Outcome {
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let mut g = RandGen::for_trial(3, trial);
        let a = random_algebra(&mut g);
        let t = g.random_operator(&a, 4);
        let p = graph_projector(&t);
        let proj = projection_residual(&p).unwrap();
        let x = g.vector(t.domain());
        let on = x.pair(&t.apply(&x).unwrap()).unwrap();
        let fixed = p.apply(&on).unwrap().sub(&on).unwrap().max_abs();
        let y = g.vector(t.codomain());
        let off = t.adjoint().apply(&y).unwrap().neg().pair(&y).unwrap();
        let annihilated = p.apply(&off).unwrap().max_abs();
        let m = proj.max(fixed).max(annihilated);
        ensure(m <= 1e-9, || {
            format!("trial {trial}: projection {proj:.2e}, fix {fixed:.2e}, annihilate {annihilated:.2e}")
        })?;
        worst = worst.max(m);
    }
    Ok(format!("500 maps, worst {worst:.2e}"))
}

fn graph_unitaries() -> Outcome {
    let (mut worst, mut cases) = (0.0f64, 0usize);
    for trial in 0..200 {
        let mut g = RandGen::for_trial(4, trial);
        let a = random_algebra(&mut g);
        let t = g.random_operator(&a, 4);
        for p in a.all_seminorms() {
            let u = graph_unitary(&t, &p).unwrap();
            let m = u.source_residual.max(u.target_residual);
            ensure(m <= 1e-9, || {
                format!("trial {trial}, support {:?}: residual {m:.2e}", p.support())
            })?;
            worst = worst.max(m);
            cases += 1;
        }
    }
    Ok(format!(
        "200 maps, {cases} (map, support) pairs, worst {worst:.2e}"
    ))
}

fn polar_contract() -> Outcome {
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let mut g = RandGen::for_trial(5, trial);
        let a = random_algebra(&mut g);
        let t = g.random_operator(&a, 4);
        let r = polar_op(&t).residuals(&t).unwrap();
        ensure(r.max() <= 1e-9, || format!("trial {trial}: {r:?}"))?;
        worst = worst.max(r.max());
    }
    Ok(format!("500 maps, worst {worst:.2e}"))
}

fn bounded_below() -> Outcome {
    let (mut worst_c, mut worst_gap, mut pairs) = (0.0f64, f64::INFINITY, 0usize);
    for trial in 0..200 {
        let mut g = RandGen::for_trial(6, trial);
        let a = random_algebra(&mut g);
        let (n, m) = (g.int_in(1, 4), g.int_in(1, 4));
        let e = FreeModule::new(a.clone(), n);
        let f = FreeModule::new(a.clone(), m);
        // rank min(k, n, m)·d in a block of size d
        let k = g.int_in(0, n.min(m));
        let t = g.low_rank_operator(&e, &f, k);
        let proj = pinv_op(&t).compose(&t).unwrap();
        let xs: Vec<_> = (0..50)
            .map(|_| proj.apply(&g.vector(&e)).unwrap())
            .collect();
        // smallest nonzero singular value of each block, with its rank checked
        let mut block_sigma = Vec::new();
        for (b, blk) in t.blocks().iter().enumerate() {
            let sigma = common::brute_singular_values(blk);
            let cutoff = 1e-8 * (1.0 + sigma.first().copied().unwrap_or(0.0));
            let rank = sigma.iter().filter(|&&s| s > cutoff).count();
            let expected = k.min(n).min(m) * a.dims()[b];
            ensure(rank == expected, || {
                format!("trial {trial}, block {b}: rank {rank}, constructed {expected}")
            })?;
            block_sigma.push(sigma[..rank].last().copied());
        }
        for p in a.all_seminorms() {
            let bb = bounded_below_constant(&t, &p).unwrap();
            let brute = p
                .support()
                .iter()
                .filter_map(|&b| block_sigma[b])
                .reduce(f64::min);
            match brute {
                None => ensure(bb.degenerate && bb.c == 0.0, || {
                    format!("trial {trial}: expected a degenerate constant, got {bb:?}")
                })?,
                Some(s) => {
                    let d = (bb.c - s).abs();
                    ensure(!bb.degenerate && d <= 1e-10, || {
                        format!("trial {trial}, {:?}: c {} vs brute {s}", p.support(), bb.c)
                    })?;
                    worst_c = worst_c.max(d);
                }
            }
            for x in &xs {
                let lhs = vec_seminorm(&p, &t.apply(x).unwrap()).unwrap();
                let rhs = bb.c * vec_seminorm(&p, x).unwrap();
                ensure(lhs >= rhs - 1e-9, || {
                    format!("trial {trial}, {:?}: {lhs} < {rhs}", p.support())
                })?;
                worst_gap = worst_gap.min(lhs - rhs);
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "200 maps, {pairs} supports, c_p vs brute force worst {worst_c:.2e}, min slack {worst_gap:.2e}"
    ))
}

/// `T† + (I − T†T)·J·TT†` with `J` the all-ones map: satisfies three Penrose
/// equations but `(ST)* = ST` generally fails.
fn skewed_pinv(t: &ModuleMap) -> ModuleMap {
    let s = pinv_op(t);
    let ones = t
        .blocks()
        .iter()
        .map(|b| CMatrix::from_fn(b.cols(), b.rows(), |_, _| C64::new(1.0, 0.0)))
        .collect();
    let j = ModuleMap::from_blocks(t.codomain(), t.domain(), ones).unwrap();
    let st = s.compose(t).unwrap();
    let ker = ModuleMap::identity(t.domain()).sub(&st).unwrap();
    let ran = t.compose(&s).unwrap();
    s.add(&ker.compose(&j).unwrap().compose(&ran).unwrap())
        .unwrap()
}

fn theorem_harness() -> Outcome {
    let cfg = TrialConfig {
        dims: vec![1, 2],
        max_rank: 3,
        trials: 100,
        seed: 0,
        tol: 1e-8,
    };
    let rep = verify_theorem(&cfg).map_err(|e| e.to_string())?;
    ensure(rep.conditions.len() == 8, || "expected 8 conditions".into())?;
    ensure(rep.passed(), || {
        let bad: Vec<_> = rep
            .conditions
            .iter()
            .filter(|c| c.failures > 0)
            .map(|c| format!("{}: {}", c.condition, c.failures))
            .collect();
        format!("failures {bad:?}")
    })?;
    let hooks = Hooks { pinv: skewed_pinv };
    let bad = verify_theorem_with(&cfg, &hooks).map_err(|e| e.to_string())?;
    let gi = bad
        .condition("generalized-inverse")
        .ok_or("missing condition")?;
    ensure(gi.failures > 0, || {
        "corrupted inverse went unnoticed".into()
    })?;
    ensure(gi.witness.is_some(), || {
        "no witness for the corrupted inverse".into()
    })?;
    Ok(format!(
        "8 conditions x 100 trials, 0 failures; corrupted inverse caught in {}/{} trials",
        gi.failures, gi.trials
    ))
}

/// `vec(T_b X) = (I_d ⊗ T_b) vec(X)` for column-major `vec`.
fn left_multiplication_raw(t: &ModuleMap) -> RawLinearMap {
    let dims = t.algebra().dims().to_vec();
    let blocks = t
        .blocks()
        .iter()
        .zip(&dims)
        .map(|(tb, &d)| {
            let (r, c) = tb.shape();
            CMatrix::from_fn(r * d, c * d, |i, j| {
                if i / r == j / c {
                    tb[(i % r, j % c)]
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    RawLinearMap::new(t.algebra(), t.domain().rank(), t.codomain().rank(), blocks).unwrap()
}

fn recognition() -> Outcome {
    for trial in 0..100 {
        let mut g = RandGen::for_trial(8, trial);
        let a = random_algebra(&mut g);
        let t = g.random_operator(&a, 4);
        let raw = left_multiplication_raw(&t);
        let back = raw.recognize().map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(back == t, || {
            format!("trial {trial}: recognized map differs")
        })?;
        ensure(back.to_raw() == raw, || {
            format!("trial {trial}: raw form differs")
        })?;
    }
    // X ↦ Xᵀ on M_2: vec(Xᵀ) = K vec(X)
    let mut k = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            k[(j + 2 * i, i + 2 * j)] = C64::new(1.0, 0.0);
        }
    }
    let transpose = RawLinearMap::new(&alg(&[2]), 1, 1, vec![k]).unwrap();
    ensure(transpose.recognize().is_err(), || {
        "transpose accepted".into()
    })?;
    let worst = (0..2)
        .flat_map(|r| (0..2).map(move |c| (r, c)))
        .map(|(r, c)| transpose.unit_residual(0, r, c))
        .fold(0.0, f64::max);
    ensure(worst >= 0.5, || format!("transpose residual {worst}"))?;
    Ok(format!(
        "100 maps recognized exactly; transpose rejected with residual {worst:.2}"
    ))
}

fn inner_product_axioms() -> Outcome {
    let (mut pos, mut lin) = (0.0f64, 0.0f64);
    for trial in 0..1000 {
        let mut g = RandGen::for_trial(9, trial);
        let a = random_algebra(&mut g);
        let e = FreeModule::new(a.clone(), g.int_in(1, 4));
        let (x, y, z) = (g.vector(&e), g.vector(&e), g.vector(&e));
        let c = g.element(&a);
        let xy = inner(&x, &y).unwrap();
        ensure(xy == inner(&y, &x).unwrap().star(), || {
            format!("trial {trial}: conjugate symmetry is not exact")
        })?;
        let xx = inner(&x, &x).unwrap();
        let min_eig = xx
            .blocks()
            .iter()
            .map(|b| {
                let h = cstarmod::linalg::hermitian_eig(b, 0.0).unwrap();
                *h.values.last().unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        ensure(xx.is_positive(1e-9) && min_eig >= -1e-9, || {
            format!("trial {trial}: smallest eigenvalue {min_eig}")
        })?;
        pos = pos.max(-min_eig);
        // ⟨x, y·c + z⟩ = ⟨x, y⟩·c + ⟨x, z⟩
        let lhs = inner(&x, &y.right_mul(&c).unwrap().add(&z).unwrap()).unwrap();
        let rhs = xy.mul(&c).unwrap().add(&inner(&x, &z).unwrap()).unwrap();
        let d = lhs.sub(&rhs).unwrap().max_abs();
        ensure(d <= 1e-12, || {
            format!("trial {trial}: linearity residual {d:.3e}")
        })?;
        lin = lin.max(d);
    }
    Ok(format!(
        "1000 trials, symmetry exact, worst negativity {pos:.2e}, worst linearity {lin:.2e}"
    ))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cstar-mod").chain(args.iter().copied());
    let code = cstarmod::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn cli_round_trip() -> Outcome {
    let map = fixture("map.json");
    let ok: Vec<Vec<String>> = vec![
        vec!["pinv".into(), map.clone()],
        vec!["pinv".into(), fixture("identity_map.json")],
        vec!["polar".into(), map.clone()],
        vec!["adjoint".into(), map.clone()],
        vec!["graph-proj".into(), map.clone()],
        vec!["complement".into(), fixture("submodule.json")],
        vec!["check-raw".into(), fixture("left_mult_raw.json")],
        vec!["check-raw".into(), fixture("transpose_block.json")],
        vec![
            "localize".into(),
            "--support".into(),
            "1".into(),
            fixture("vector.json"),
        ],
        vec![
            "localize".into(),
            "--support".into(),
            "".into(),
            map.clone(),
        ],
        vec![
            "c-bound".into(),
            "--support".into(),
            "0,1".into(),
            map.clone(),
        ],
        vec!["elem-pinv".into(), fixture("element.json")],
        vec!["commute".into(), map.clone(), "--trials".into(), "3".into()],
        vec![
            "verify".into(),
            "--suite".into(),
            "theorem".into(),
            "--dims".into(),
            "1,2".into(),
            "--trials".into(),
            "10".into(),
        ],
        vec![
            "verify".into(),
            "--suite".into(),
            "lemmas".into(),
            "--dims".into(),
            "1,2".into(),
            "--trials".into(),
            "5".into(),
        ],
    ];
    let failing: Vec<Vec<String>> = vec![vec![
        "verify".into(),
        "--suite".into(),
        "theorem".into(),
        "--dims".into(),
        "1,2".into(),
        "--trials".into(),
        "5".into(),
        "--tol".into(),
        "1e-300".into(),
    ]];
    let invalid: Vec<Vec<String>> = vec![
        vec!["pinv".into(), fixture("bad_version.json")],
        vec!["pinv".into(), fixture("unknown_field.json")],
        vec!["pinv".into(), fixture("bad_shape.json")],
        vec!["pinv".into(), fixture("not_json.json")],
        vec!["pinv".into(), fixture("element.json")],
        vec!["complement".into(), map.clone()],
        vec![
            "localize".into(),
            "--support".into(),
            "7".into(),
            map.clone(),
        ],
        vec![
            "verify".into(),
            "--suite".into(),
            "theorem".into(),
            "--dims".into(),
            "".into(),
        ],
        vec!["frobnicate".into()],
    ];
    let mut emitted = 0;
    for (cases, want) in [(&ok, 0), (&failing, 1), (&invalid, 2)] {
        for args in cases.iter() {
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, out, err) = cli(&args);
            ensure(code == want, || {
                format!("{args:?}: exit {code}, wanted {want}; {err}")
            })?;
            if want == 2 {
                ensure(
                    out.is_empty() && err.trim_end().lines().count() == 1,
                    || format!("{args:?}: expected one diagnostic line, got {err:?}"),
                )?;
                continue;
            }
            let doc = Document::from_json(&out).map_err(|e| format!("{args:?}: {e}"))?;
            let again = Document::from_json(&doc.to_json()).map_err(|e| e.to_string())?;
            ensure(
                again == doc && doc.to_json().trim_end() == out.trim_end(),
                || format!("{args:?}: output does not re-parse equal"),
            )?;
            emitted += 1;
        }
    }
    let (code, out, _) = cli(&["--help"]);
    ensure(code == 0 && !out.is_empty(), || "help failed".into())?;
    let (code, out, _) = cli(&["--version"]);
    ensure(code == 0 && out.starts_with("cstar-mod"), || {
        "version failed".into()
    })?;
    Ok(format!(
        "{emitted} documents re-parse equal; {} usage/document errors exit 2",
        invalid.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("penrose suite", penrose),
        ("localization commutation", localization_commutation),
        ("graph theorem", graph_theorem),
        ("graph unitary", graph_unitaries),
        ("polar contract", polar_contract),
        ("bounded-below constant", bounded_below),
        ("theorem harness", theorem_harness),
        ("module-map recognition", recognition),
        ("inner-product axioms", inner_product_axioms),
        ("cli round-trip", cli_round_trip),
    ];
    panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of 10 criteria passed in {:.1}s",
        10 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
