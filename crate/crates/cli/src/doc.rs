//! JSON documents for surfaces, coverings, automorphisms, monodromy data and
//! refinement scripts.
//!
//! Rationals travel as strings `"p/q"` (or `"p"`), reduced on output. Output
//! is pretty-printed with keys in sorted order, so writing a parsed document
//! back gives its canonical bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qdc_core::covering::MonodromySpec;
use qdc_core::refine::RefineStep;
use qdc_core::scalar::parse_rational;
use qdc_core::{
    AffineAutomorphism, CoveringMap, ExactField, FlagId, Rational, RationalMatrix, RationalVector, Surface,
    VertexStatus,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const SURFACE_FORMAT: &str = "htqd-surface/1";
pub const COVER_FORMAT: &str = "htqd-cover/1";
pub const AUTO_FORMAT: &str = "htqd-auto/1";
pub const MONODROMY_FORMAT: &str = "htqd-monodromy/1";
pub const REFINE_FORMAT: &str = "htqd-refine/1";

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },
    #[error("cannot parse rational {text:?} at {path}")]
    RationalParse { path: String, text: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Core(#[from] qdc_core::Error),
}

impl DocError {
    pub fn kind(&self) -> &'static str {
        match self {
            DocError::Schema { .. } => "SchemaError",
            DocError::RationalParse { .. } => "RationalParseError",
            DocError::Io { .. } => "IoError",
            DocError::Core(_) => "InvalidInput",
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            DocError::Schema { path, .. } | DocError::RationalParse { path, .. } | DocError::Io { path, .. } => {
                Some(path)
            }
            DocError::Core(_) => None,
        }
    }

    fn nested(self, prefix: &str) -> Self {
        let join = |p: String| if p == "." { prefix.to_string() } else { format!("{prefix}.{p}") };
        match self {
            DocError::Schema { path, reason } => DocError::Schema { path: join(path), reason },
            DocError::RationalParse { path, text } => DocError::RationalParse { path: join(path), text },
            other => other,
        }
    }
}

fn schema(path: impl Into<String>, reason: impl Into<String>) -> DocError {
    DocError::Schema { path: path.into(), reason: reason.into() }
}

fn rational(path: impl Into<String>, text: &str) -> Result<Rational, DocError> {
    parse_rational(text).ok_or_else(|| DocError::RationalParse { path: path.into(), text: text.into() })
}

fn check_format(found: &str, expected: &str) -> Result<(), DocError> {
    if found == expected {
        Ok(())
    } else {
        Err(schema("format", format!("expected {expected:?}, found {found:?}")))
    }
}

/// Parses JSON, reporting the path of the first offending field.
pub fn from_slice<D: DeserializeOwned>(bytes: &[u8]) -> Result<D, DocError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, DocError> {
    std::fs::read(path).map_err(|e| DocError::Io { path: path.display().to_string(), reason: e.to_string() })
}

/// Pretty JSON with sorted keys and a trailing newline. Arrays and objects
/// holding only scalars stay on one line.
pub fn to_canonical_string<S: Serialize>(value: &S) -> String {
    let v = serde_json::to_value(value).expect("documents serialize");
    let mut out = String::new();
    emit(&v, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    let scalar = |x: &Value| !matches!(x, Value::Array(_) | Value::Object(_));
    let shallow = |x: &Value| match x {
        Value::Array(a) => a.iter().all(scalar),
        Value::Object(o) => o.values().all(scalar),
        _ => true,
    };
    match v {
        Value::Array(a) => a.iter().all(shallow),
        Value::Object(o) => o.values().all(shallow),
        _ => true,
    }
}

fn inline(v: &serde_json::Value, out: &mut String) {
    use serde_json::Value;
    match v {
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                inline(x, out);
            }
            out.push(']');
        }
        Value::Object(o) => {
            out.push('{');
            for (i, (k, x)) in o.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                inline(x, out);
            }
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}

fn emit(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    if is_flat(v) {
        inline(v, out);
        return;
    }
    let pad = "  ".repeat(depth + 1);
    match v {
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                emit(x, depth + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push(']');
        }
        Value::Object(o) => {
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                emit(x, depth + 1, out);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push('}');
        }
        _ => unreachable!("scalars are flat"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfEdgeRecord {
    pub id: u64,
    pub twin: u64,
    pub next: u64,
    pub vector: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StatusValue {
    Named(String),
    Orbifold { orbifold: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatusRecord {
    pub flag: u64,
    pub status: StatusValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub halfedges: Vec<HalfEdgeRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertex_status: Vec<StatusRecord>,
}

/// Document ids in increasing order; a flag's index is the rank of its id.
#[derive(Clone, Debug, Default)]
pub struct IdMap {
    ids: Vec<u64>,
}

impl IdMap {
    pub fn index(&self, id: u64) -> Option<FlagId> {
        self.ids.binary_search(&id).ok()
    }

    pub fn resolve(&self, id: u64, path: impl Into<String>) -> Result<FlagId, DocError> {
        self.index(id).ok_or_else(|| schema(path, format!("unknown half-edge id {id}")))
    }
}

fn status_value(s: VertexStatus) -> StatusValue {
    match s {
        VertexStatus::Puncture => StatusValue::Named("puncture".into()),
        VertexStatus::Filled => StatusValue::Named("filled".into()),
        VertexStatus::Orbifold(n) => StatusValue::Orbifold { orbifold: n },
    }
}

fn vector_strings(v: &RationalVector) -> [String; 2] {
    [v.x.to_fraction_string(), v.y.to_fraction_string()]
}

fn parse_vector(path: &str, v: &[String; 2]) -> Result<RationalVector, DocError> {
    Ok(RationalVector::new(rational(format!("{path}[0]"), &v[0])?, rational(format!("{path}[1]"), &v[1])?))
}

impl SurfaceDocument {
    /// Ids are flag indices; every vertex lists its status at its smallest flag.
    pub fn from_surface(s: &Surface) -> Self {
        let halfedges = (0..s.num_flags())
            .map(|e| HalfEdgeRecord {
                id: e as u64,
                twin: s.twin(e) as u64,
                next: s.next(e) as u64,
                vector: vector_strings(s.vector(e)),
            })
            .collect();
        let mut vertex_status: Vec<StatusRecord> = (0..s.vertices().len())
            .map(|v| StatusRecord {
                flag: *s.vertices()[v].iter().min().expect("vertices have flags") as u64,
                status: status_value(s.status(v)),
            })
            .collect();
        vertex_status.sort_by_key(|r| r.flag);
        SurfaceDocument { format: SURFACE_FORMAT.into(), name: s.name().map(str::to_string), halfedges, vertex_status }
    }

    /// Builds the surface without checking its geometry.
    pub fn to_surface(&self) -> Result<(Surface, IdMap), DocError> {
        check_format(&self.format, SURFACE_FORMAT)?;
        if self.halfedges.is_empty() {
            return Err(schema("halfedges", "no half-edges"));
        }
        let mut ids: Vec<u64> = self.halfedges.iter().map(|h| h.id).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(schema("halfedges", format!("duplicate half-edge id {}", w[0])));
        }
        let map = IdMap { ids };
        let n = self.halfedges.len();
        let mut twin = vec![0; n];
        let mut next = vec![0; n];
        let mut vectors = vec![RationalVector::zero(); n];
        for (i, h) in self.halfedges.iter().enumerate() {
            let e = map.index(h.id).expect("id was collected");
            twin[e] = map.resolve(h.twin, format!("halfedges[{i}].twin"))?;
            next[e] = map.resolve(h.next, format!("halfedges[{i}].next"))?;
            vectors[e] = parse_vector(&format!("halfedges[{i}].vector"), &h.vector)?;
        }
        let mut statuses = vec![None; n];
        for (i, r) in self.vertex_status.iter().enumerate() {
            let e = map.resolve(r.flag, format!("vertex_status[{i}].flag"))?;
            let path = format!("vertex_status[{i}].status");
            statuses[e] = Some(match &r.status {
                StatusValue::Named(s) if s == "puncture" => VertexStatus::Puncture,
                StatusValue::Named(s) if s == "filled" => VertexStatus::Filled,
                StatusValue::Named(s) => return Err(schema(path, format!("unknown status {s:?}"))),
                StatusValue::Orbifold { orbifold } if *orbifold >= 2 => VertexStatus::Orbifold(*orbifold),
                StatusValue::Orbifold { .. } => return Err(schema(path, "orbifold order must be at least 2")),
            });
        }
        let mut s = Surface::from_flag_statuses(twin, next, vectors, statuses)?;
        if let Some(name) = &self.name {
            s = s.with_name(name.clone());
        }
        Ok((s, map))
    }
}

/// A surface given inline or as a path relative to the referring document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SurfaceRef {
    Inline(Box<SurfaceDocument>),
    Path(String),
}

impl SurfaceRef {
    fn load(&self, base: &Path, field: &str) -> Result<(Surface, IdMap), DocError> {
        match self {
            SurfaceRef::Inline(doc) => doc.to_surface().map_err(|e| e.nested(field)),
            SurfaceRef::Path(p) => {
                let path = base.join(p);
                let doc: SurfaceDocument = from_slice(&read_file(&path)?).map_err(|e| e.nested(field))?;
                doc.to_surface().map_err(|e| e.nested(field))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDocument {
    pub format: String,
    pub source: SurfaceRef,
    pub target: SurfaceRef,
    pub map: Vec<[u64; 2]>,
}

fn flag_map(pairs: &[[u64; 2]], from: &IdMap, to: &IdMap, n: usize) -> Result<Vec<FlagId>, DocError> {
    let mut phi = vec![None; n];
    for (i, &[a, b]) in pairs.iter().enumerate() {
        let e = from.resolve(a, format!("map[{i}][0]"))?;
        let f = to.resolve(b, format!("map[{i}][1]"))?;
        if phi[e].replace(f).is_some() {
            return Err(schema(format!("map[{i}][0]"), format!("half-edge id {a} is mapped twice")));
        }
    }
    phi.into_iter()
        .enumerate()
        .map(|(e, f)| f.ok_or_else(|| schema("map", format!("half-edge id {} has no image", from.ids[e]))))
        .collect()
}

fn pairs(phi: &[FlagId]) -> Vec<[u64; 2]> {
    phi.iter().enumerate().map(|(e, &f)| [e as u64, f as u64]).collect()
}

impl CoverDocument {
    pub fn from_cover(map: &CoveringMap) -> Self {
        CoverDocument {
            format: COVER_FORMAT.into(),
            source: SurfaceRef::Inline(Box::new(SurfaceDocument::from_surface(map.source()))),
            target: SurfaceRef::Inline(Box::new(SurfaceDocument::from_surface(map.target()))),
            map: pairs(map.phi()),
        }
    }

    /// `base` is the directory that relative surface paths start from.
    pub fn to_cover(&self, base: &Path) -> Result<CoveringMap, DocError> {
        check_format(&self.format, COVER_FORMAT)?;
        let (src, src_ids) = self.source.load(base, "source")?;
        let (tgt, tgt_ids) = self.target.load(base, "target")?;
        let phi = flag_map(&self.map, &src_ids, &tgt_ids, src.num_flags())?;
        Ok(CoveringMap::new(src, tgt, phi))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoDocument {
    pub format: String,
    pub surface: SurfaceRef,
    pub map: Vec<[u64; 2]>,
    /// Rows of the derivative.
    pub derivative: [[String; 2]; 2],
}

impl AutoDocument {
    pub fn from_auto(f: &AffineAutomorphism) -> Self {
        let m = f.derivative();
        AutoDocument {
            format: AUTO_FORMAT.into(),
            surface: SurfaceRef::Inline(Box::new(SurfaceDocument::from_surface(f.surface()))),
            map: pairs(f.map()),
            derivative: [
                [m.a.to_fraction_string(), m.b.to_fraction_string()],
                [m.c.to_fraction_string(), m.d.to_fraction_string()],
            ],
        }
    }

    pub fn to_auto(&self, base: &Path) -> Result<AffineAutomorphism, DocError> {
        check_format(&self.format, AUTO_FORMAT)?;
        let (s, ids) = self.surface.load(base, "surface")?;
        let map = flag_map(&self.map, &ids, &ids, s.num_flags())?;
        let d = &self.derivative;
        let r = |i: usize, j: usize| rational(format!("derivative[{i}][{j}]"), &d[i][j]);
        let m = RationalMatrix::new(r(0, 0)?, r(0, 1)?, r(1, 0)?, r(1, 1)?);
        Ok(AffineAutomorphism::new(s, map, m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermRecord {
    pub flag: u64,
    /// One-based images of the sheets.
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyDocument {
    pub format: String,
    pub degree: usize,
    #[serde(default)]
    pub perms: Vec<PermRecord>,
}

impl MonodromyDocument {
    pub fn to_spec(&self, ids: &IdMap) -> Result<MonodromySpec, DocError> {
        check_format(&self.format, MONODROMY_FORMAT)?;
        let mut perms = BTreeMap::new();
        for (i, r) in self.perms.iter().enumerate() {
            let e = ids.resolve(r.flag, format!("perms[{i}].flag"))?;
            let p = r
                .perm
                .iter()
                .map(|&k| {
                    k.checked_sub(1).ok_or_else(|| schema(format!("perms[{i}].perm"), "sheets are numbered from 1"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if perms.insert(e, p).is_some() {
                return Err(schema(format!("perms[{i}].flag"), "flag listed twice"));
            }
        }
        Ok(MonodromySpec { degree: self.degree, perms })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StepRecord {
    SplitEdge { edge: u64, t: String },
    InsertChord { face: u64, from: usize, to: usize },
    SplitFace { face: u64, point: [String; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefineDocument {
    pub format: String,
    pub steps: Vec<StepRecord>,
}

impl RefineDocument {
    /// Flags are numbered as in the canonical document of the surface being
    /// refined at that step; new flags are appended after the existing ones.
    pub fn to_steps(&self) -> Result<Vec<RefineStep<Rational>>, DocError> {
        check_format(&self.format, REFINE_FORMAT)?;
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let flag = |id: u64| id as FlagId;
                Ok(match s {
                    StepRecord::SplitEdge { edge, t } => {
                        RefineStep::SplitEdge { edge: flag(*edge), t: rational(format!("steps[{i}].split_edge.t"), t)? }
                    }
                    StepRecord::InsertChord { face, from, to } => {
                        RefineStep::InsertChord { face: flag(*face), from: *from, to: *to }
                    }
                    StepRecord::SplitFace { face, point } => RefineStep::SplitFace {
                        face: flag(*face),
                        point: parse_vector(&format!("steps[{i}].split_face.point"), point)?,
                    },
                })
            })
            .collect()
    }
}

/// Directory of `path`, for resolving relative references.
pub fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn load_surface(path: &Path) -> Result<(Surface, IdMap), DocError> {
    let doc: SurfaceDocument = from_slice(&read_file(path)?)?;
    doc.to_surface()
}

pub fn load_cover(path: &Path) -> Result<CoveringMap, DocError> {
    let doc: CoverDocument = from_slice(&read_file(path)?)?;
    doc.to_cover(&base_dir(path))
}

pub fn load_auto(path: &Path) -> Result<AffineAutomorphism, DocError> {
    let doc: AutoDocument = from_slice(&read_file(path)?)?;
    doc.to_auto(&base_dir(path))
}

/// `"a,b;c,d"`, row-major.
pub fn parse_matrix(text: &str) -> Result<RationalMatrix, DocError> {
    let rows: Vec<&str> = text.split(';').collect();
    let cells: Vec<&str> = rows.iter().flat_map(|r| r.split(',')).collect();
    if rows.len() != 2 || cells.len() != 4 {
        return Err(schema("--matrix", format!("expected \"a,b;c,d\", found {text:?}")));
    }
    let r = |i: usize| rational(format!("--matrix[{i}]"), cells[i]);
    Ok(RationalMatrix::new(r(0)?, r(1)?, r(2)?, r(3)?))
}
