//! JSON interchange documents.
//!
//! A document is an object with a `"version"` key and exactly one payload key
//! naming its kind:
//!
//! ```json
//! {"version": "cstar-mod/1", "map": {"dims": [1, 2], "domain_rank": 1, "codomain_rank": 1, "entries": [[{"blocks": [...]}]]}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Unknown fields are rejected. Floats are written with 17
//! significant digits, so every emitted document parses back to an equal value.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::{AlgElem, BlockAlgebra, Seminorm};
use crate::error::{Error, Result};
use crate::harness::{LemmaReport, TheoremReport};
use crate::hilbmod::{FreeModule, ModVector, Submodule};
use crate::invsys::CommutationReport;
use crate::linalg::{CMatrix, C64};
use crate::opmap::{ModuleMap, RawLinearMap};

pub const VERSION: &str = "cstar-mod/1";

type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    dims: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    blocks: Vec<MatrixDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeminormDoc {
    dims: Vec<usize>,
    support: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorDoc {
    dims: Vec<usize>,
    coords: Vec<ElementDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubmoduleDoc {
    dims: Vec<usize>,
    rank: usize,
    generators: Vec<VectorDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    dims: Vec<usize>,
    domain_rank: usize,
    codomain_rank: usize,
    entries: Vec<Vec<ElementDoc>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMapDoc {
    dims: Vec<usize>,
    domain_rank: usize,
    codomain_rank: usize,
    blocks: Vec<MatrixDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResultDoc {
    op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verdict: Option<String>,
    #[serde(default)]
    outputs: Map<String, Value>,
    #[serde(default)]
    values: Map<String, Value>,
    #[serde(default)]
    flags: Map<String, Value>,
}

/// Output of a single command: named documents, numbers and flags.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OpResult {
    pub op: String,
    pub verdict: Option<String>,
    pub outputs: Vec<(String, Payload)>,
    pub values: Vec<(String, f64)>,
    pub flags: Vec<(String, bool)>,
}

impl OpResult {
    pub fn new(op: &str) -> Self {
        Self {
            op: op.to_string(),
            ..Self::default()
        }
    }

    pub fn output(mut self, name: &str, payload: Payload) -> Self {
        self.outputs.push((name.to_string(), payload));
        self
    }

    pub fn value(mut self, name: &str, v: f64) -> Self {
        self.values.push((name.to_string(), v));
        self
    }

    pub fn flag(mut self, name: &str, f: bool) -> Self {
        self.flags.push((name.to_string(), f));
        self
    }

    pub fn verdict(mut self, v: &str) -> Self {
        self.verdict = Some(v.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Algebra(BlockAlgebra),
    Element(AlgElem),
    Seminorm(Seminorm),
    Vector(ModVector),
    Submodule(Submodule),
    Map(ModuleMap),
    Rawmap(RawLinearMap),
    Result(Box<OpResult>),
    TheoremReport(TheoremReport),
    LemmaReport(LemmaReport),
    CommutationReport(CommutationReport),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Algebra(_) => "algebra",
            Payload::Element(_) => "element",
            Payload::Seminorm(_) => "seminorm",
            Payload::Vector(_) => "vector",
            Payload::Submodule(_) => "submodule",
            Payload::Map(_) => "map",
            Payload::Rawmap(_) => "rawmap",
            Payload::Result(_) => "result",
            Payload::TheoremReport(_) => "theorem_report",
            Payload::LemmaReport(_) => "lemma_report",
            Payload::CommutationReport(_) => "commutation_report",
        }
    }

    /// The payload body, without the kind key.
    pub fn to_value(&self) -> Value {
        let v = match self {
            Payload::Algebra(a) => serde_json::to_value(AlgebraDoc {
                dims: a.dims().to_vec(),
            }),
            Payload::Element(a) => serde_json::to_value(element_doc(a)),
            Payload::Seminorm(p) => serde_json::to_value(SeminormDoc {
                dims: p.algebra().dims().to_vec(),
                support: p.support().to_vec(),
            }),
            Payload::Vector(x) => serde_json::to_value(vector_doc(x)),
            Payload::Submodule(f) => serde_json::to_value(SubmoduleDoc {
                dims: f.module().algebra().dims().to_vec(),
                rank: f.module().rank(),
                generators: f.generators().iter().map(vector_doc).collect(),
            }),
            Payload::Map(t) => serde_json::to_value(MapDoc {
                dims: t.algebra().dims().to_vec(),
                domain_rank: t.domain().rank(),
                codomain_rank: t.codomain().rank(),
                entries: t
                    .entries()
                    .iter()
                    .map(|row| row.iter().map(element_doc).collect())
                    .collect(),
            }),
            Payload::Rawmap(r) => serde_json::to_value(RawMapDoc {
                dims: r.algebra().dims().to_vec(),
                domain_rank: r.domain_rank(),
                codomain_rank: r.codomain_rank(),
                blocks: r.blocks().iter().map(matrix_doc).collect(),
            }),
            Payload::Result(r) => serde_json::to_value(ResultDoc {
                op: r.op.clone(),
                verdict: r.verdict.clone(),
                outputs: r
                    .outputs
                    .iter()
                    .map(|(k, p)| (k.clone(), p.tagged_value()))
                    .collect(),
                values: r
                    .values
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::from(*v)))
                    .collect(),
                flags: r
                    .flags
                    .iter()
                    .map(|(k, f)| (k.clone(), Value::from(*f)))
                    .collect(),
            }),
            Payload::TheoremReport(r) => serde_json::to_value(r),
            Payload::LemmaReport(r) => serde_json::to_value(r),
            Payload::CommutationReport(r) => serde_json::to_value(r),
        };
        v.expect("payload documents serialize")
    }

    /// `{"<kind>": body}`.
    pub fn tagged_value(&self) -> Value {
        let mut m = Map::new();
        m.insert(self.kind().to_string(), self.to_value());
        Value::Object(m)
    }

    /// Decodes a payload body of the given kind; `path` prefixes diagnostics.
    pub fn from_value(kind: &str, v: Value, path: &str) -> Result<Self> {
        let path = if path.is_empty() {
            kind.to_string()
        } else {
            format!("{path}.{kind}")
        };
        Ok(match kind {
            "algebra" => {
                Payload::Algebra(algebra_from(parse::<AlgebraDoc>(v, &path)?.dims, &path)?)
            }
            "element" => Payload::Element(element_from(parse(v, &path)?, None, &path)?),
            "seminorm" => {
                let d: SeminormDoc = parse(v, &path)?;
                let alg = algebra_from(d.dims, &path)?;
                Payload::Seminorm(
                    Seminorm::new(&alg, &d.support).map_err(|e| field(&path, "support", e))?,
                )
            }
            "vector" => Payload::Vector(vector_from(parse(v, &path)?, None, &path)?),
            "submodule" => {
                let d: SubmoduleDoc = parse(v, &path)?;
                let module = FreeModule::new(algebra_from(d.dims, &path)?, d.rank);
                let generators = d
                    .generators
                    .into_iter()
                    .enumerate()
                    .map(|(i, g)| vector_from(g, Some(&module), &format!("{path}.generators[{i}]")))
                    .collect::<Result<_>>()?;
                Payload::Submodule(
                    Submodule::new(&module, generators)
                        .map_err(|e| field(&path, "generators", e))?,
                )
            }
            "map" => Payload::Map(map_from(parse(v, &path)?, &path)?),
            "rawmap" => {
                let d: RawMapDoc = parse(v, &path)?;
                let alg = algebra_from(d.dims, &path)?;
                if d.blocks.len() != alg.num_blocks() {
                    return Err(Error::Document(format!(
                        "{path}.blocks: expected {} blocks, found {}",
                        alg.num_blocks(),
                        d.blocks.len()
                    )));
                }
                let blocks = d
                    .blocks
                    .iter()
                    .zip(alg.dims())
                    .enumerate()
                    .map(|(b, (m, &n))| {
                        let shape = (d.codomain_rank * n * n, d.domain_rank * n * n);
                        matrix_from(m, Some(shape), &format!("{path}.blocks[{b}]"))
                    })
                    .collect::<Result<_>>()?;
                Payload::Rawmap(
                    RawLinearMap::new(&alg, d.domain_rank, d.codomain_rank, blocks)
                        .map_err(|e| field(&path, "blocks", e))?,
                )
            }
            "result" => Payload::Result(Box::new(result_from(parse(v, &path)?, &path)?)),
            "theorem_report" => Payload::TheoremReport(parse(v, &path)?),
            "lemma_report" => Payload::LemmaReport(parse(v, &path)?),
            "commutation_report" => Payload::CommutationReport(parse(v, &path)?),
            other => return Err(Error::Document(format!("unknown document kind `{other}`"))),
        })
    }

    fn from_tagged(v: Value, path: &str) -> Result<Self> {
        let Value::Object(m) = v else {
            return Err(Error::Document(format!(
                "{path}: expected an object with one kind key"
            )));
        };
        if m.len() != 1 {
            let keys: Vec<&String> = m.keys().collect();
            return Err(Error::Document(format!(
                "{path}: expected exactly one kind key, found {keys:?}"
            )));
        }
        let (kind, body) = m.into_iter().next().expect("one entry");
        Self::from_value(&kind, body, path)
    }
}

/// A versioned document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub payload: Payload,
}

impl Document {
    pub fn new(payload: Payload) -> Self {
        Self { payload }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("version".to_string(), Value::from(VERSION));
        m.insert(self.payload.kind().to_string(), self.payload.to_value());
        Value::Object(m)
    }

    /// Pretty-printed JSON with 17 significant digits per float.
    pub fn to_json(&self) -> String {
        to_json_string(&self.to_value())
    }

    pub fn from_value(v: Value) -> Result<Self> {
        let Value::Object(mut m) = v else {
            return Err(Error::Document("top level: expected a JSON object".into()));
        };
        match m.remove("version") {
            None => return Err(Error::Document("version: missing field".into())),
            Some(Value::String(s)) if s == VERSION => {}
            Some(other) => {
                return Err(Error::Document(format!(
                    "version: expected \"{VERSION}\", found {other}"
                )));
            }
        }
        match m.len() {
            0 => Err(Error::Document(
                "payload: missing; expected one kind key next to version".into(),
            )),
            1 => {
                let (kind, body) = m.into_iter().next().expect("one entry");
                Ok(Self::new(Payload::from_value(&kind, body, "")?))
            }
            _ => {
                let keys: Vec<&String> = m.keys().collect();
                Err(Error::Document(format!(
                    "payload: expected exactly one kind key, found {keys:?}"
                )))
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Error::Document(format!("invalid JSON: {e}")))?;
        Self::from_value(v)
    }
}

struct SignificantDigits<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl serde_json::ser::Formatter for SignificantDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Pretty JSON with every float in `{:.16e}` form.
pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let fmt = SignificantDigits {
        inner: serde_json::ser::PrettyFormatter::with_indent(b" "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    v.serialize(&mut ser).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

fn parse<T: for<'de> Deserialize<'de>>(v: Value, path: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Document(format!("{path}: {e}")))
}

fn field(path: &str, name: &str, e: Error) -> Error {
    Error::Document(format!("{path}.{name}: {e}"))
}

fn matrix_doc(m: &CMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn element_doc(a: &AlgElem) -> ElementDoc {
    ElementDoc {
        blocks: a.blocks().iter().map(matrix_doc).collect(),
    }
}

fn vector_doc(x: &ModVector) -> VectorDoc {
    VectorDoc {
        dims: x.module().algebra().dims().to_vec(),
        coords: x.coords().iter().map(element_doc).collect(),
    }
}

fn algebra_from(dims: Vec<usize>, path: &str) -> Result<BlockAlgebra> {
    if dims.is_empty() {
        return Ok(BlockAlgebra::zero_algebra());
    }
    BlockAlgebra::new(dims).map_err(|e| field(path, "dims", e))
}

/// `shape = None` means square of any positive size.
fn matrix_from(m: &MatrixDoc, shape: Option<(usize, usize)>, path: &str) -> Result<CMatrix> {
    let rows = m.len();
    let (want_rows, want_cols) = shape.unwrap_or((rows, rows));
    if shape.is_none() && rows == 0 {
        return Err(Error::Document(format!(
            "{path}: expected a nonempty square matrix"
        )));
    }
    if rows != want_rows {
        return Err(Error::Document(format!(
            "{path}: expected {want_rows} rows, found {rows}"
        )));
    }
    if let Some((i, r)) = m.iter().enumerate().find(|(_, r)| r.len() != want_cols) {
        return Err(Error::Document(format!(
            "{path}[{i}]: expected {want_cols} columns, found {}",
            r.len()
        )));
    }
    let data = m
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    CMatrix::from_vec(want_rows, want_cols, data)
        .map_err(|e| Error::Document(format!("{path}: {e}")))
}

fn element_from(d: ElementDoc, algebra: Option<&BlockAlgebra>, path: &str) -> Result<AlgElem> {
    let blocks: Vec<CMatrix> = match algebra {
        Some(alg) => {
            if d.blocks.len() != alg.num_blocks() {
                return Err(Error::Document(format!(
                    "{path}.blocks: expected {} blocks, found {}",
                    alg.num_blocks(),
                    d.blocks.len()
                )));
            }
            d.blocks
                .iter()
                .zip(alg.dims())
                .enumerate()
                .map(|(b, (m, &n))| matrix_from(m, Some((n, n)), &format!("{path}.blocks[{b}]")))
                .collect::<Result<_>>()?
        }
        None => d
            .blocks
            .iter()
            .enumerate()
            .map(|(b, m)| matrix_from(m, None, &format!("{path}.blocks[{b}]")))
            .collect::<Result<_>>()?,
    };
    AlgElem::from_blocks(blocks).map_err(|e| field(path, "blocks", e))
}

fn vector_from(d: VectorDoc, module: Option<&FreeModule>, path: &str) -> Result<ModVector> {
    let alg = algebra_from(d.dims, path)?;
    let module = match module {
        Some(m) => {
            if m.algebra() != &alg || m.rank() != d.coords.len() {
                return Err(Error::Document(format!(
                    "{path}: expected a vector of rank {} over {:?}, found rank {} over {:?}",
                    m.rank(),
                    m.algebra().dims(),
                    d.coords.len(),
                    alg.dims()
                )));
            }
            m.clone()
        }
        None => FreeModule::new(alg.clone(), d.coords.len()),
    };
    let coords = d
        .coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| element_from(c, Some(&alg), &format!("{path}.coords[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    ModVector::new(&module, &coords).map_err(|e| field(path, "coords", e))
}

fn map_from(d: MapDoc, path: &str) -> Result<ModuleMap> {
    let alg = algebra_from(d.dims, path)?;
    if d.entries.len() != d.codomain_rank {
        return Err(Error::Document(format!(
            "{path}.entries: expected {} rows, found {}",
            d.codomain_rank,
            d.entries.len()
        )));
    }
    let mut entries = Vec::with_capacity(d.entries.len());
    for (i, row) in d.entries.into_iter().enumerate() {
        if row.len() != d.domain_rank {
            return Err(Error::Document(format!(
                "{path}.entries[{i}]: expected {} entries, found {}",
                d.domain_rank,
                row.len()
            )));
        }
        entries.push(
            row.into_iter()
                .enumerate()
                .map(|(j, e)| element_from(e, Some(&alg), &format!("{path}.entries[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let domain = FreeModule::new(alg.clone(), d.domain_rank);
    let codomain = FreeModule::new(alg, d.codomain_rank);
    ModuleMap::from_entries(&domain, &codomain, &entries).map_err(|e| field(path, "entries", e))
}

fn result_from(d: ResultDoc, path: &str) -> Result<OpResult> {
    let outputs = d
        .outputs
        .into_iter()
        .map(|(k, v)| {
            let p = Payload::from_tagged(v, &format!("{path}.outputs.{k}"))?;
            Ok((k, p))
        })
        .collect::<Result<_>>()?;
    let values = d
        .values
        .into_iter()
        .map(|(k, v)| match v.as_f64() {
            Some(x) => Ok((k, x)),
            None => Err(Error::Document(format!(
                "{path}.values.{k}: expected a number, found {v}"
            ))),
        })
        .collect::<Result<_>>()?;
    let flags = d
        .flags
        .into_iter()
        .map(|(k, v)| match v.as_bool() {
            Some(x) => Ok((k, x)),
            None => Err(Error::Document(format!(
                "{path}.flags.{k}: expected a boolean, found {v}"
            ))),
        })
        .collect::<Result<_>>()?;
    Ok(OpResult {
        op: d.op,
        verdict: d.verdict,
        outputs,
        values,
        flags,
    })
}
