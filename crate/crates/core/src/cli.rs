//! Command-line front end.
//!
//! Every command reads one JSON document (or `-` for stdin) and writes one
//! JSON document to stdout. Exit status: 0 on success, 1 when a verification
//! suite reports failures, 2 on a malformed command line or document.

use std::fs;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{BlockAlgebra, Seminorm};
use crate::document::{to_json_string, Document, OpResult, Payload};
use crate::error::{Error, Result};
use crate::harness::{lemma_suite, verify_theorem, TrialConfig};
use crate::hilbmod::{inner, Submodule};
use crate::invsys::commutation_suite;
use crate::opmap::{
    bounded_below_constant, graph_projector, pinv_op, polar_op, projection_residual, ModuleMap,
    RawLinearMap,
};
use crate::random::RandGen;

#[derive(Parser, Debug)]
#[command(
    name = "cstar-mod",
    version,
    about = "Hilbert modules over block-matrix algebras"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Theorem,
    Lemmas,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moore–Penrose inverse of a map, with the four Penrose residuals.
    Pinv { file: String },
    /// Polar decomposition T = V|T| of a map.
    Polar { file: String },
    /// Adjoint of a map.
    Adjoint { file: String },
    /// Projection onto the graph of a map.
    GraphProj { file: String },
    /// Orthogonal complement of a submodule.
    Complement { file: String },
    /// Decide whether a raw linear map is a module map.
    CheckRaw { file: String },
    /// Localize any document at a seminorm.
    Localize {
        /// 0-based comma-separated block indices; empty for the zero seminorm.
        #[arg(long, value_parser = parse_support, allow_hyphen_values = true)]
        support: Support,
        file: String,
    },
    /// Lower bound constant c_p of a map on Ker(T)^⊥.
    CBound {
        #[arg(long, value_parser = parse_support)]
        support: Support,
        file: String,
    },
    /// Moore–Penrose inverse of an algebra element.
    ElemPinv { file: String },
    /// Check that operator constructions commute with localization.
    Commute {
        file: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a randomized verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Block sizes, comma separated.
        #[arg(long, value_parser = parse_dims)]
        dims: Dims,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
}

#[derive(Clone, Debug)]
struct Support(Vec<usize>);

#[derive(Clone, Debug)]
struct Dims(Vec<usize>);

fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

fn parse_support(s: &str) -> std::result::Result<Support, String> {
    parse_list(s).map(Support)
}

fn parse_dims(s: &str) -> std::result::Result<Dims, String> {
    parse_list(s).map(Dims)
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let _ = writeln!(err, "{}", line.trim());
            return 2;
        }
    };
    match execute(&cli) {
        Ok((doc, passed)) => {
            let text = match cli.format {
                Format::Json => doc.to_json(),
                Format::Text => render_text(&doc),
            };
            if writeln!(out, "{text}").is_err() {
                return 2;
            }
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.to_string().replace('\n', " "));
            2
        }
    }
}

fn read_document(path: &str) -> Result<Payload> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Document(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Document(format!("{path}: {e}")))?
    };
    Ok(Document::from_json(&text)?.payload)
}

fn wrong_kind(want: &str, got: &Payload) -> Error {
    Error::Document(format!("expected a {want} document, found {}", got.kind()))
}

fn read_map(path: &str) -> Result<ModuleMap> {
    match read_document(path)? {
        Payload::Map(t) => Ok(t),
        other => Err(wrong_kind("map", &other)),
    }
}

fn seminorm_for(algebra: &BlockAlgebra, support: &Support) -> Result<Seminorm> {
    algebra
        .seminorm(&support.0)
        .map_err(|e| Error::Document(format!("--support: {e}")))
}

fn max4(r: [f64; 4]) -> f64 {
    r.into_iter().fold(0.0, f64::max)
}

fn penrose_values(res: OpResult, r: [f64; 4]) -> OpResult {
    res.value("tst_minus_t", r[0])
        .value("sts_minus_s", r[1])
        .value("ts_selfadjoint", r[2])
        .value("st_selfadjoint", r[3])
        .value("max_residual", max4(r))
}

fn result(r: OpResult) -> (Document, bool) {
    (Document::new(Payload::Result(Box::new(r))), true)
}

fn execute(cli: &Cli) -> Result<(Document, bool)> {
    Ok(match &cli.command {
        Command::Pinv { file } => {
            let t = read_map(file)?;
            let s = pinv_op(&t);
            let r = crate::opmap::penrose_residuals(&t, &s)?;
            result(penrose_values(
                OpResult::new("pinv").output("pinv", Payload::Map(s)),
                r,
            ))
        }
        Command::Polar { file } => {
            let t = read_map(file)?;
            let parts = polar_op(&t);
            let r = parts.residuals(&t)?;
            result(
                OpResult::new("polar")
                    .output("v", Payload::Map(parts.v))
                    .output("abs", Payload::Map(parts.abs))
                    .value("factorization", r.factorization)
                    .value("partial_isometry", r.partial_isometry)
                    .value("initial_space", r.initial_space)
                    .value("final_space", r.final_space)
                    .value("kernel", r.kernel),
            )
        }
        Command::Adjoint { file } => {
            let t = read_map(file)?;
            let adj = t.adjoint();
            let mut g = RandGen::new(0);
            let (x, y) = (g.vector(t.domain()), g.vector(t.codomain()));
            let pairing = inner(&t.apply(&x)?, &y)?
                .sub(&inner(&x, &adj.apply(&y)?)?)?
                .max_abs();
            result(
                OpResult::new("adjoint")
                    .output("adjoint", Payload::Map(adj))
                    .value("pairing_residual", pairing),
            )
        }
        Command::GraphProj { file } => {
            let t = read_map(file)?;
            let p = graph_projector(&t);
            let r = projection_residual(&p)?;
            result(
                OpResult::new("graph-proj")
                    .output("projector", Payload::Map(p))
                    .value("projection_residual", r),
            )
        }
        Command::Complement { file } => {
            let f = match read_document(file)? {
                Payload::Submodule(f) => f,
                other => return Err(wrong_kind("submodule", &other)),
            };
            let biorth = f.biorth_residual();
            result(
                OpResult::new("complement")
                    .output("projector", Payload::Map(f.projector()))
                    .output("complement_projector", Payload::Map(f.orth_complement()))
                    .output("complement", Payload::Submodule(f.complement_submodule()))
                    .value("biorth_residual", biorth)
                    .flag("biorth", f.biorth_check()),
            )
        }
        Command::CheckRaw { file } => {
            let raw = match read_document(file)? {
                Payload::Rawmap(r) => r,
                other => return Err(wrong_kind("rawmap", &other)),
            };
            result(check_raw(&raw))
        }
        Command::Localize { support, file } => {
            let doc = read_document(file)?;
            let (localized, p) = localize_payload(doc, support)?;
            result(
                OpResult::new("localize")
                    .output("seminorm", Payload::Seminorm(p))
                    .output("localized", localized),
            )
        }
        Command::CBound { support, file } => {
            let t = read_map(file)?;
            let p = seminorm_for(t.algebra(), support)?;
            let bb = bounded_below_constant(&t, &p)?;
            result(
                OpResult::new("c-bound")
                    .output("seminorm", Payload::Seminorm(p.clone()))
                    .value("c", bb.c)
                    .value("upper_bound", t.bound_constant(&p)?)
                    .flag("degenerate", bb.degenerate),
            )
        }
        Command::ElemPinv { file } => {
            let a = match read_document(file)? {
                Payload::Element(a) => a,
                other => return Err(wrong_kind("element", &other)),
            };
            let s = a.pinv();
            let r = a.penrose_residuals(&s)?;
            result(penrose_values(
                OpResult::new("elem-pinv").output("pinv", Payload::Element(s)),
                r,
            ))
        }
        Command::Commute { file, trials, seed } => {
            let t = read_map(file)?;
            let sems = crate::invsys::sample_seminorms(t.algebra(), *seed);
            let rep = commutation_suite(&t, &sems, *trials, *seed)?;
            let passed = rep.all_pass();
            (Document::new(Payload::CommutationReport(rep)), passed)
        }
        Command::Verify {
            suite,
            dims,
            trials,
            seed,
            tol,
            max_rank,
        } => {
            let cfg = TrialConfig {
                dims: dims.0.clone(),
                max_rank: *max_rank,
                trials: *trials,
                seed: *seed,
                tol: *tol,
            };
            match suite {
                Suite::Theorem => {
                    let rep = verify_theorem(&cfg)?;
                    let passed = rep.passed();
                    (Document::new(Payload::TheoremReport(rep)), passed)
                }
                Suite::Lemmas => {
                    let rep = lemma_suite(&cfg)?;
                    let passed = rep.passed();
                    (Document::new(Payload::LemmaReport(rep)), passed)
                }
            }
        }
    })
}

fn check_raw(raw: &RawLinearMap) -> OpResult {
    let mut worst = 0.0f64;
    for (b, &d) in raw.algebra().dims().iter().enumerate() {
        for row in 0..d {
            for col in 0..d {
                worst = worst.max(raw.unit_residual(b, row, col));
            }
        }
    }
    let res = OpResult::new("check-raw").value("commutation_residual", worst);
    match raw.recognize() {
        Ok(t) => res
            .verdict("module-map")
            .flag("module_map", true)
            .output("map", Payload::Map(t)),
        Err(Error::NotAModuleMap { block, row, col, residual }) => res
            .verdict(&format!(
                "not a module map: block {block} fails to commute with E({row},{col}), residual {residual:.16e}"
            ))
            .flag("module_map", false),
        Err(e) => res.verdict(&format!("not a module map: {e}")).flag("module_map", false),
    }
}

fn localize_payload(doc: Payload, support: &Support) -> Result<(Payload, Seminorm)> {
    let algebra = match &doc {
        Payload::Algebra(a) => a.clone(),
        Payload::Element(a) => a.algebra(),
        Payload::Vector(x) => x.module().algebra().clone(),
        Payload::Submodule(f) => f.module().algebra().clone(),
        Payload::Map(t) => t.algebra().clone(),
        Payload::Rawmap(r) => r.algebra().clone(),
        other => {
            return Err(Error::Document(format!(
                "cannot localize a {} document",
                other.kind()
            )))
        }
    };
    let p = seminorm_for(&algebra, support)?;
    let out = match doc {
        Payload::Algebra(_) => Payload::Algebra(p.quotient_algebra()),
        Payload::Element(a) => Payload::Element(p.localize(&a)?),
        Payload::Vector(x) => Payload::Vector(x.localize(&p)?),
        Payload::Submodule(f) => Payload::Submodule(Submodule::localize(&f, &p)?),
        Payload::Map(t) => Payload::Map(t.localize(&p)?),
        Payload::Rawmap(r) => {
            let blocks = p.support().iter().map(|&b| r.blocks()[b].clone()).collect();
            Payload::Rawmap(RawLinearMap::new(
                &p.quotient_algebra(),
                r.domain_rank(),
                r.codomain_rank(),
                blocks,
            )?)
        }
        _ => unreachable!("kinds filtered above"),
    };
    Ok((out, p))
}

fn describe(p: &Payload) -> String {
    match p {
        Payload::Algebra(a) => format!("algebra {:?}", a.dims()),
        Payload::Element(a) => format!("element over {:?}", a.algebra().dims()),
        Payload::Seminorm(s) => format!("seminorm with support {:?}", s.support()),
        Payload::Vector(x) => format!(
            "vector of rank {} over {:?}",
            x.module().rank(),
            x.module().algebra().dims()
        ),
        Payload::Submodule(f) => format!(
            "submodule of rank-{} module over {:?} with {} generators",
            f.module().rank(),
            f.module().algebra().dims(),
            f.generators().len()
        ),
        Payload::Map(t) => format!(
            "map {} -> {} over {:?}",
            t.domain().rank(),
            t.codomain().rank(),
            t.algebra().dims()
        ),
        Payload::Rawmap(r) => format!(
            "raw map {} -> {} over {:?}",
            r.domain_rank(),
            r.codomain_rank(),
            r.algebra().dims()
        ),
        other => other.kind().to_string(),
    }
}

fn render_text(doc: &Document) -> String {
    let mut lines = Vec::new();
    match &doc.payload {
        Payload::Result(r) => {
            lines.push(format!("op: {}", r.op));
            if let Some(v) = &r.verdict {
                lines.push(format!("verdict: {v}"));
            }
            for (k, v) in &r.values {
                lines.push(format!("{k} = {v:.16e}"));
            }
            for (k, f) in &r.flags {
                lines.push(format!("{k}: {f}"));
            }
            for (k, p) in &r.outputs {
                lines.push(format!("{k}: {}", describe(p)));
                lines.push(to_json_string(&p.tagged_value()));
            }
        }
        Payload::TheoremReport(rep) => {
            lines.push(format!(
                "{:<26} {:>7} {:>9} {:>24}",
                "condition", "trials", "failures", "worst residual"
            ));
            for c in &rep.conditions {
                lines.push(format!(
                    "{:<26} {:>7} {:>9} {:>24.16e}",
                    c.condition, c.trials, c.failures, c.worst_residual
                ));
            }
            lines.push(if rep.passed() {
                "PASS".into()
            } else {
                "FAIL".into()
            });
        }
        Payload::LemmaReport(rep) => {
            lines.push(format!(
                "{:<34} {:>7} {:>9} {:>7} {:>24}",
                "lemma", "trials", "failures", "missed", "worst residual"
            ));
            for l in &rep.lemmas {
                lines.push(format!(
                    "{:<34} {:>7} {:>9} {:>7} {:>24.16e}",
                    l.lemma, l.trials, l.failures, l.missed_detections, l.worst_residual
                ));
            }
            lines.push(if rep.passed() {
                "PASS".into()
            } else {
                "FAIL".into()
            });
        }
        Payload::CommutationReport(rep) => {
            for law in rep.laws() {
                let worst = rep.worst(law).unwrap_or(0.0);
                let pass = rep.entries.iter().filter(|e| e.law == law).all(|e| e.pass);
                lines.push(format!(
                    "{law:<22} {worst:>24.16e} {}",
                    if pass { "pass" } else { "FAIL" }
                ));
            }
        }
        other => lines.push(to_json_string(&other.tagged_value())),
    }
    lines.join("\n")
}
