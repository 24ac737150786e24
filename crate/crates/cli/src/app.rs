//! Command line parsing and dispatch.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use qdc_core::commensurate::{common_quotient_pair, maximal_quotient};
use qdc_core::covering::{
    construct_cover, enumerate_covers, fiber_product, find_coverings, is_symmetric, DEFAULT_MAX_DEGREE,
};
use qdc_core::fibered::{descend_automorphism, order_of, validate_affine, Order};
use qdc_core::isomorphy::{are_conjugate, canonical_form, symmetry_group};
use qdc_core::refine::refine;
use qdc_core::{Error, ExactField, Surface};
use serde_json::{json, Value};

use crate::doc::{
    self, AutoDocument, CoverDocument, DocError, MonodromyDocument, RefineDocument, StatusValue, SurfaceDocument,
};
use crate::poset::Poset;

/// Environment variable overriding the enumeration cap.
pub const MAX_DEGREE_VAR: &str = "QDC_MAX_DEGREE";

#[derive(Debug, Parser)]
#[command(name = "qdc", version, about = "Exact commensurability tools for quadratic differentials")]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every structural and geometric condition of a surface.
    Validate { file: PathBuf },
    /// Invariants of a valid surface.
    Info { file: PathBuf },
    /// Apply a matrix with positive determinant.
    Act {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        file: PathBuf,
    },
    /// Subdivide a surface by a refinement script.
    Refine {
        file: PathBuf,
        #[arg(long)]
        script: PathBuf,
    },
    /// Build the covers described by sheet permutations.
    Lift {
        file: PathBuf,
        #[arg(long)]
        monodromy: PathBuf,
    },
    /// Is QT symmetric with respect to COVER?
    Symmetric { qt: PathBuf, cover: PathBuf },
    /// Push QT forward along COVER.
    Pushforward { qt: PathBuf, cover: PathBuf },
    /// Fiber product of two covers of one surface.
    Fiberprod { cover1: PathBuf, cover2: PathBuf },
    /// Connected covers of a given degree, up to conjugacy.
    Covers {
        #[arg(long)]
        degree: usize,
        file: PathBuf,
    },
    /// Coverings from SRC onto DST.
    Findcover { src: PathBuf, dst: PathBuf },
    /// Common quotient of the targets of two covers with one source.
    QuotientPair { cover1: PathBuf, cover2: PathBuf },
    /// Minimal element of the commensurability class.
    Minimal {
        file: PathBuf,
        /// Emit the covering onto the minimal element instead of the surface.
        #[arg(long)]
        cover: bool,
    },
    /// Decide conjugacy and print a witness.
    Iso { file1: PathBuf, file2: PathBuf },
    /// Self-isomorphisms of a surface.
    Symgroup { file: PathBuf },
    /// Descend an automorphism through a covering.
    Descend { auto: PathBuf, cover: PathBuf },
    /// Order of an affine automorphism.
    Order { auto: PathBuf },
    /// Covering poset above the minimal element, as DOT.
    Poset {
        file: PathBuf,
        #[arg(long)]
        degree_bound: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Answer {
    Yes(String),
    No(String),
}

fn yes(v: Value) -> Result<Answer, DocError> {
    Ok(Answer::Yes(doc::to_canonical_string(&v)))
}

fn no(v: Value) -> Result<Answer, DocError> {
    Ok(Answer::No(doc::to_canonical_string(&v)))
}

fn value<S: serde::Serialize>(s: &S) -> Value {
    serde_json::to_value(s).expect("documents serialize")
}

fn surface_value(s: &Surface) -> Value {
    value(&SurfaceDocument::from_surface(s))
}

fn cover_value(c: &qdc_core::CoveringMap) -> Value {
    value(&CoverDocument::from_cover(c))
}

/// Name of the error variant, for machine-readable records.
pub fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn valid_surface(path: &Path) -> Result<Surface, DocError> {
    let (s, _) = doc::load_surface(path)?;
    s.validate()?;
    Ok(s)
}

fn valid_cover(path: &Path) -> Result<qdc_core::CoveringMap, DocError> {
    let c = doc::load_cover(path)?;
    c.validate()?;
    Ok(c)
}

fn max_degree() -> Result<usize, DocError> {
    match std::env::var(MAX_DEGREE_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| DocError::Schema {
            path: MAX_DEGREE_VAR.into(),
            reason: format!("not a non-negative integer: {v:?}"),
        }),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn info(s: &Surface) -> Value {
    let vertices: Vec<Value> = (0..s.vertices().len())
        .map(|v| {
            let status = match s.status(v) {
                qdc_core::VertexStatus::Puncture => StatusValue::Named("puncture".into()),
                qdc_core::VertexStatus::Filled => StatusValue::Named("filled".into()),
                qdc_core::VertexStatus::Orbifold(n) => StatusValue::Orbifold { orbifold: n },
            };
            json!({
                "flag": s.vertices()[v].iter().min(),
                "status": status,
                "angle_multiple": s.angle_multiple(v),
            })
        })
        .collect();
    json!({
        "name": s.name(),
        "flags": s.num_flags(),
        "edges": s.num_edges(),
        "faces": s.faces().len(),
        "vertices": vertices,
        "genus": s.genus(),
        "punctures": s.puncture_count(),
        "orbifold_points": s.orbifold_point_count(),
        "area": s.area().to_fraction_string(),
        "orbifold_euler_characteristic": s.orbifold_euler_characteristic().to_fraction_string(),
        "type_condition": s.satisfies_type_condition(),
        "canonical_form": canonical_form(s).encoding_str(),
    })
}

fn run_command(cli: &Cli) -> Result<Answer, DocError> {
    match &cli.command {
        Command::Validate { file } => {
            let (s, _) = doc::load_surface(file)?;
            match s.validate() {
                Ok(_) => {
                    let mut v = info(&s);
                    v["valid"] = json!(true);
                    yes(v)
                }
                Err(e) => no(json!({"valid": false, "error": {"kind": error_kind(&e), "message": e.to_string()}})),
            }
        }
        Command::Info { file } => yes(info(&valid_surface(file)?)),
        Command::Act { matrix, file } => {
            let m = doc::parse_matrix(matrix)?;
            yes(surface_value(&valid_surface(file)?.matrix_act(&m)?))
        }
        Command::Refine { file, script } => {
            let s = valid_surface(file)?;
            let script: RefineDocument = doc::from_slice(&doc::read_file(script)?)?;
            let (r, _) = refine(&s, &script.to_steps()?)?;
            yes(surface_value(&r))
        }
        Command::Lift { file, monodromy } => {
            let (s, ids) = doc::load_surface(file)?;
            s.validate()?;
            let spec: MonodromyDocument = doc::from_slice(&doc::read_file(monodromy)?)?;
            let comps = construct_cover(&s, &spec.to_spec(&ids)?)?;
            yes(Value::Array(comps.iter().map(cover_value).collect()))
        }
        Command::Symmetric { qt, cover } | Command::Pushforward { qt, cover } => {
            let (q, _) = doc::load_surface(qt)?;
            let c = doc::load_cover(cover)?;
            c.validate_combinatorics()?;
            match is_symmetric(&q, &c)? {
                Some(pushed) if matches!(cli.command, Command::Pushforward { .. }) => yes(surface_value(&pushed)),
                Some(_) => yes(json!({"symmetric": true})),
                None => no(json!({"symmetric": false})),
            }
        }
        Command::Fiberprod { cover1, cover2 } => {
            let (a, b) = (valid_cover(cover1)?, valid_cover(cover2)?);
            let comps = fiber_product(&a, &b)?;
            let out = comps
                .iter()
                .map(|c| {
                    json!({
                        "degree": c.proj1.degree() * a.degree(),
                        "proj1": cover_value(&c.proj1),
                        "proj2": cover_value(&c.proj2),
                    })
                })
                .collect();
            yes(Value::Array(out))
        }
        Command::Covers { degree, file } => {
            let s = valid_surface(file)?;
            let covers = enumerate_covers(&s, *degree, max_degree()?)?;
            yes(Value::Array(covers.iter().map(cover_value).collect()))
        }
        Command::Findcover { src, dst } => {
            let found = find_coverings(&valid_surface(src)?, &valid_surface(dst)?);
            let v = Value::Array(found.iter().map(cover_value).collect());
            if found.is_empty() {
                no(v)
            } else {
                yes(v)
            }
        }
        Command::QuotientPair { cover1, cover2 } => {
            let cq = common_quotient_pair(&valid_cover(cover1)?, &valid_cover(cover2)?)?;
            yes(json!({
                "quotient": surface_value(cq.quotient()),
                "to_quotient": cover_value(&cq.to_quotient),
                "lifts": [cover_value(&cq.lifts[0]), cover_value(&cq.lifts[1])],
                "factors": [cover_value(&cq.factors[0]), cover_value(&cq.factors[1])],
            }))
        }
        Command::Minimal { file, cover } => {
            let m = maximal_quotient(&valid_surface(file)?)?;
            if *cover {
                yes(cover_value(&m.map))
            } else {
                yes(surface_value(m.quotient()))
            }
        }
        Command::Iso { file1, file2 } => match are_conjugate(&valid_surface(file1)?, &valid_surface(file2)?) {
            Some(w) => yes(cover_value(&w)),
            None => no(json!({"conjugate": false})),
        },
        Command::Symgroup { file } => {
            let g = symmetry_group(&valid_surface(file)?);
            let elements: Vec<Value> =
                g.iter().map(|m| json!(m.phi().iter().enumerate().map(|(e, &f)| [e, f]).collect::<Vec<_>>())).collect();
            yes(json!({
                "order": g.len(),
                "complex": surface_value(g[0].source()),
                "elements": elements,
            }))
        }
        Command::Descend { auto, cover } => {
            let f = doc::load_auto(auto)?;
            let p = doc::load_cover(cover)?;
            f.surface().validate()?;
            match descend_automorphism(&f, &p) {
                Ok(d) => yes(json!({
                    "quotient": surface_value(d.quotient()),
                    "quotient_map": cover_value(&d.quotient_map),
                    "descended": value(&AutoDocument::from_auto(&d.descended)),
                    "descended_order": order_of(&d.descended).to_string(),
                    "factor": d.factor.as_ref().map(cover_value),
                    "probes": d.probes,
                })),
                Err(e @ Error::NotSymmetricUnderPowers { .. }) => {
                    no(json!({"descends": false, "error": {"kind": error_kind(&e), "message": e.to_string()}}))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Order { auto } => {
            let f = doc::load_auto(auto)?;
            f.surface().validate()?;
            validate_affine(&f)?;
            let order = match order_of(&f) {
                Order::Finite(k) => json!(k),
                Order::Infinite => json!("infinite"),
            };
            yes(json!({"order": order}))
        }
        Command::Poset { file, degree_bound, dot } => {
            let s = valid_surface(file)?;
            let text = Poset::build(&s, *degree_bound, max_degree()?)?.to_dot();
            match dot {
                Some(path) => {
                    write(path, &text)?;
                    yes(json!({"dot": path.display().to_string()}))
                }
                None => Ok(Answer::Yes(text)),
            }
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), DocError> {
    std::fs::write(path, text).map_err(|e| DocError::Io { path: path.display().to_string(), reason: e.to_string() })
}

fn error_record(e: &DocError) -> String {
    let kind = match e {
        DocError::Core(c) => error_kind(c),
        other => other.kind().to_string(),
    };
    let mut rec = json!({"kind": kind, "message": e.to_string()});
    if let Some(p) = e.path() {
        rec["path"] = json!(p);
    }
    serde_json::to_string(&json!({ "error": rec })).expect("records serialize") + "\n"
}

/// Runs one command line; nothing is printed, files named by `--out` or
/// `--dot` are written.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Execution { code, stdout: text, stderr: String::new() }
            } else {
                let rec = json!({"error": {"kind": "UsageError", "message": text.trim_end()}});
                Execution { code, stdout: String::new(), stderr: serde_json::to_string(&rec).unwrap() + "\n" }
            };
        }
    };
    let (code, body) = match run_command(&cli) {
        Ok(Answer::Yes(b)) => (0, b),
        Ok(Answer::No(b)) => (1, b),
        Err(e) => return Execution { code: 2, stdout: String::new(), stderr: error_record(&e) },
    };
    match &cli.out {
        Some(path) => match write(path, &body) {
            Ok(()) => Execution { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Execution { code: 2, stdout: String::new(), stderr: error_record(&e) },
        },
        None => Execution { code, stdout: body, stderr: String::new() },
    }
}
