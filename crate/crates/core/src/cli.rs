//! Command-line front end. [`run`] parses arguments, calls into the library
//! and renders either aligned text tables or JSON; the binary only prints
//! the result and exits with its code.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 disagreement
//! between branching methods, 4 numerical residual or convergence failure.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::affine::{level_of, LevelVector, SMatrix};
use crate::algebra::{build_algebra, SemisimpleAlgebra, Weight};
use crate::branching::{branch_closed, branch_oracle, branch_rs, level_bound, BranchingTable};
use crate::embedding::{catalog, catalog_lookup, diagonal, embedding_index, Embedding};
use crate::error::Error;
use crate::nimrep::{level_window, nim_window, psi, psi_prime, verify_nim, TwistedA2};
use crate::quadrature::{integral_a1_in_a2, integral_a1_tensor, QuadratureResult, DEFAULT_TOLERANCE};
use crate::weyl::{dimension, weight_system};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "lie-branch", version, about = "Branching rules, fusion and NIM-reps of semi-simple Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a g-module restricted to a subalgebra p.
    Branch(BranchArgs),
    /// Tensor product decomposition (branching along the diagonal).
    Tensor(TensorArgs),
    /// Fusion coefficients from the Verlinde formula.
    Verlinde(VerlindeArgs),
    /// Kac-Peterson S-matrix at a level.
    Smatrix(SmatrixArgs),
    /// Weight system of an irreducible module.
    Weights(WeightsArgs),
    /// NIM-rep matrix n_i of an embedding on a window of weights.
    Nimrep(NimrepArgs),
    /// Twisted A2 NIM-rep at an even level, read through Psi or Psi'.
    #[command(name = "nimrep-a2")]
    NimrepA2(NimrepA2Args),
    /// Integral formulas for branching coefficients.
    Integral(IntegralArgs),
    /// Built-in embeddings.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct EmbeddingSource {
    /// Name of a built-in embedding (see `catalog list`).
    #[arg(long)]
    pub catalog: Option<String>,
    /// JSON file `{"name", "g", "p", "P"}`.
    #[arg(long)]
    pub embedding: Option<PathBuf>,
}

impl EmbeddingSource {
    fn load(&self) -> Result<Embedding, Error> {
        match (&self.catalog, &self.embedding) {
            (Some(name), _) => catalog_lookup(name),
            (None, Some(path)) => Embedding::from_path(path),
            (None, None) => Err(Error::Invalid("one of --catalog or --embedding is required".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rs,
    Closed,
    Oracle,
    All,
}

#[derive(Debug, Args)]
pub struct BranchArgs {
    #[command(flatten)]
    pub source: EmbeddingSource,
    /// Highest weight of g, e.g. [1,1].
    #[arg(short = 'i', allow_hyphen_values = true)]
    pub weight: Weight,
    #[arg(long, value_enum, default_value = "rs")]
    pub method: MethodArg,
    /// Level for the closed formula, e.g. 4 or 4,2 (default: level bound).
    #[arg(long)]
    pub level: Option<LevelArg>,
    /// Also list subalgebra weights up to the level bound with coefficient 0.
    #[arg(long)]
    pub zeros: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(short = 'i', allow_hyphen_values = true)]
    pub i: Weight,
    #[arg(short = 'j', allow_hyphen_values = true)]
    pub j: Weight,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerlindeArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long)]
    pub level: LevelArg,
    #[arg(short = 'i', allow_hyphen_values = true)]
    pub i: Weight,
    #[arg(short = 'j', allow_hyphen_values = true)]
    pub j: Weight,
    /// Only this coefficient.
    #[arg(short = 'l', allow_hyphen_values = true)]
    pub l: Option<Weight>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SmatrixArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long)]
    pub level: LevelArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(short = 'i', allow_hyphen_values = true)]
    pub weight: Weight,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct NimrepArgs {
    #[command(flatten)]
    pub source: EmbeddingSource,
    #[arg(short = 'i', allow_hyphen_values = true)]
    pub weight: Weight,
    /// Levels of the subalgebra weights in the window, `lo..hi` (inclusive).
    #[arg(long, default_value = "0..8")]
    pub window: WindowArg,
    /// Also check the NIM axioms against this second weight.
    #[arg(long, allow_hyphen_values = true)]
    pub verify_with: Option<Weight>,
    /// Levels reserved at the top of the window for `--verify-with`
    /// (default: the larger level bound of the two weights).
    #[arg(long)]
    pub margin: Option<i64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LabelMap {
    Psi,
    Psiprime,
    Raw,
}

#[derive(Debug, Args)]
pub struct NimrepA2Args {
    #[arg(long)]
    pub level: i64,
    #[arg(short = 'i', allow_hyphen_values = true)]
    pub weight: Weight,
    #[arg(long, value_enum, default_value = "psi")]
    pub map: LabelMap,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct IntegralArgs {
    #[command(subcommand)]
    pub kind: IntegralKind,
}

#[derive(Debug, Subcommand)]
pub enum IntegralKind {
    /// Multiplicity of a in a1 x a2 for A1.
    #[command(name = "a1-tensor")]
    A1Tensor(IntegralTriple),
    /// Branching coefficient of (i1,i2) to a for A1 in A2 with index 1.
    #[command(name = "a1-in-a2")]
    A1InA2(IntegralTriple),
}

#[derive(Debug, Args)]
pub struct IntegralTriple {
    pub x: i64,
    pub y: i64,
    pub a: i64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[command(subcommand)]
    pub action: CatalogAction,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List {
        #[arg(long)]
        json: bool,
    },
}

/// `4`, `4,2` or `(4,2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelArg(pub Vec<i64>);

impl FromStr for LevelArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        t.split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("bad level '{s}'")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(LevelArg)
    }
}

impl LevelArg {
    fn for_algebra(&self, alg: &SemisimpleAlgebra) -> Result<LevelVector, Error> {
        let v = if self.0.len() == 1 {
            LevelVector::uniform(alg, self.0[0])
        } else {
            LevelVector(self.0.clone())
        };
        v.check(alg)?;
        Ok(v)
    }
}

/// `lo..hi`, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowArg {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for WindowArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Invalid(format!("bad window '{s}', expected lo..hi"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().parse().map_err(|_| bad())?;
        if lo < 0 || hi < lo {
            return Err(bad());
        }
        Ok(WindowArg { lo, hi })
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
    partial: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numerical { .. } | Error::NoConvergence { .. } => EXIT_NUMERICAL,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
            partial: None,
        }
    }
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: f.partial.unwrap_or_default(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn execute(cmd: &Command) -> Result<String, Failure> {
    match cmd {
        Command::Branch(a) => cmd_branch(a),
        Command::Tensor(a) => cmd_tensor(a),
        Command::Verlinde(a) => cmd_verlinde(a),
        Command::Smatrix(a) => cmd_smatrix(a),
        Command::Weights(a) => cmd_weights(a),
        Command::Nimrep(a) => cmd_nimrep(a),
        Command::NimrepA2(a) => cmd_nimrep_a2(a),
        Command::Integral(a) => cmd_integral(a),
        Command::Catalog(a) => cmd_catalog(a),
    }
}

/// Round to 12 significant digits; `-0` becomes `0`.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x.is_finite() { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn json_text(mut v: Value) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        // Keep the version first.
        let version = map.shift_remove("schema_version").expect("just inserted");
        let rest = std::mem::take(map);
        map.insert("schema_version".into(), version);
        map.extend(rest);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (c, cell) in r.iter().enumerate() {
            width[c] = width[c].max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (c, cell) in cells.iter().enumerate() {
            if c + 1 < cols {
                s.push_str(&format!("{cell:<w$}  ", w = width[c]));
            } else {
                s.push_str(cell);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Descending level, then descending labels.
fn sort_for_display(alg: &SemisimpleAlgebra, ws: &mut [(Weight, u64)]) {
    ws.sort_by_cached_key(|(w, _)| {
        let lv = level_of(alg, w).unwrap_or_default();
        std::cmp::Reverse((lv, w.clone()))
    });
}

struct BranchReport {
    rows: Vec<(Weight, u64, u64, Vec<i64>)>,
    sum: u64,
}

fn branch_rows(p: &SemisimpleAlgebra, t: &BranchingTable, zeros_up_to: Option<&LevelVector>) -> Result<BranchReport, Error> {
    let mut entries = t.entries.clone();
    if let Some(k) = zeros_up_to {
        for w in crate::affine::integrable_weights(p, k)? {
            if t.get(&w) == 0 {
                entries.push((w, 0));
            }
        }
    }
    sort_for_display(p, &mut entries);
    let mut rows = Vec::with_capacity(entries.len());
    let mut sum = 0;
    for (a, m) in entries {
        let d = dimension(p, &a)?;
        sum += m * d;
        let lv = level_of(p, &a)?;
        rows.push((a, m, d, lv));
    }
    Ok(BranchReport { rows, sum })
}

fn branch_json(p: &SemisimpleAlgebra, t: &BranchingTable, zeros: Option<&LevelVector>) -> Result<Value, Error> {
    let rep = branch_rows(p, t, zeros)?;
    let entries: Vec<Value> = rep
        .rows
        .iter()
        .map(|(a, m, d, lv)| json!({"weight": a, "multiplicity": m, "dim": d, "level": lv}))
        .collect();
    let mut v = json!({"method": t.method.to_string(), "entries": entries, "restricted_dim": rep.sum});
    if let Some(r) = t.residual {
        v["residual"] = json!(round12(r));
    }
    if let Some(k) = &t.level {
        v["level"] = json!(k);
    }
    Ok(v)
}

fn branch_text(p: &SemisimpleAlgebra, t: &BranchingTable, dim_i: u64, zeros: Option<&LevelVector>) -> Result<String, Error> {
    let rep = branch_rows(p, t, zeros)?;
    let rows: Vec<Vec<String>> = rep
        .rows
        .iter()
        .map(|(a, m, d, _)| vec![a.to_string(), m.to_string(), d.to_string()])
        .collect();
    let mut out = table(&["a", "b_i^a", "dim(a)"], &rows);
    let status = if rep.sum == dim_i { "ok" } else { "MISMATCH" };
    out.push_str(&format!("dim check: sum b_i^a dim(a) = {}, dim(i) = {dim_i} ({status})\n", rep.sum));
    if let Some(r) = t.residual {
        out.push_str(&format!("residual: {:.3e}\n", r));
    }
    Ok(out)
}

fn cmd_branch(a: &BranchArgs) -> Result<String, Failure> {
    let emb = a.source.load()?;
    emb.g().check_rank(&a.weight.0)?;
    let level = a.level.as_ref().map(|l| l.for_algebra(emb.p())).transpose()?;
    let dim_i = dimension(emb.g(), &a.weight)?;
    let zeros = if a.zeros {
        Some(level.clone().unwrap_or(level_bound(&emb, &a.weight)?))
    } else {
        None
    };
    let run_one = |m: MethodArg| -> Result<BranchingTable, Error> {
        match m {
            MethodArg::Rs => branch_rs(&emb, &a.weight),
            MethodArg::Closed => branch_closed(&emb, &a.weight, level.as_ref()),
            MethodArg::Oracle => branch_oracle(&emb, &a.weight),
            MethodArg::All => unreachable!(),
        }
    };
    let header = json!({
        "command": "branch",
        "embedding": emb.name(),
        "g": emb.g().to_string(),
        "p": emb.p().to_string(),
        "source": a.weight,
        "dim": dim_i,
    });
    let title = format!(
        "branching of {} ({}) along {}: {} -> {}\n",
        a.weight,
        emb.g(),
        emb.name(),
        emb.p(),
        emb.g()
    );
    if a.method != MethodArg::All {
        let t = run_one(a.method)?;
        return Ok(if a.json {
            let mut v = header;
            for (k, x) in branch_json(emb.p(), &t, zeros.as_ref())?.as_object().expect("object") {
                v[k] = x.clone();
            }
            json_text(v)
        } else {
            format!("{title}method: {}\n{}", t.method, branch_text(emb.p(), &t, dim_i, zeros.as_ref())?)
        });
    }
    let tables: Vec<BranchingTable> = [MethodArg::Rs, MethodArg::Closed, MethodArg::Oracle]
        .into_iter()
        .map(run_one)
        .collect::<Result<_, _>>()?;
    let agree = tables.windows(2).all(|w| w[0].same_coefficients(&w[1]));
    let text = if a.json {
        let mut v = header;
        v["agree"] = json!(agree);
        v["methods"] = Value::Array(
            tables
                .iter()
                .map(|t| branch_json(emb.p(), t, zeros.as_ref()))
                .collect::<Result<_, _>>()?,
        );
        json_text(v)
    } else {
        let mut s = title;
        for t in &tables {
            s.push_str(&format!("\nmethod: {}\n", t.method));
            s.push_str(&branch_text(emb.p(), t, dim_i, zeros.as_ref())?);
        }
        s.push_str(&format!("\nmethods agree: {}\n", if agree { "yes" } else { "NO" }));
        s
    };
    if agree {
        Ok(text)
    } else {
        Err(Failure {
            code: EXIT_DISAGREEMENT,
            message: format!("branching methods disagree for {} along {}", a.weight, emb.name()),
            partial: Some(text),
        })
    }
}

fn cmd_tensor(a: &TensorArgs) -> Result<String, Failure> {
    let g = build_algebra(&a.algebra)?;
    g.check_rank(&a.i.0)?;
    g.check_rank(&a.j.0)?;
    let emb = diagonal(&g);
    let src = a.i.concat(&a.j);
    let t = branch_rs(&emb, &src)?;
    let dim = dimension(emb.g(), &src)?;
    Ok(if a.json {
        let mut v = json!({
            "command": "tensor",
            "algebra": g.to_string(),
            "i": a.i,
            "j": a.j,
            "dim": dim,
        });
        for (k, x) in branch_json(&g, &t, None)?.as_object().expect("object") {
            v[k] = x.clone();
        }
        json_text(v)
    } else {
        format!("tensor product {} x {} of {g}\n{}", a.i, a.j, branch_text(&g, &t, dim, None)?)
    })
}

fn cmd_verlinde(a: &VerlindeArgs) -> Result<String, Failure> {
    let g = build_algebra(&a.algebra)?;
    let k = a.level.for_algebra(&g)?;
    for w in [&a.i, &a.j].into_iter().chain(a.l.as_ref()) {
        g.check_rank(&w.0)?;
    }
    let smat = SMatrix::new(&g, &k)?;
    let (mut coeffs, residual) = match &a.l {
        Some(l) => {
            let c = smat.verlinde(&a.i, &a.j, l)?;
            (vec![(l.clone(), c.value)], c.residual)
        }
        None => {
            let row = smat.fusion(&a.i, &a.j)?;
            (row.coefficients, row.residual)
        }
    };
    sort_for_display(&g, &mut coeffs);
    Ok(if a.json {
        let entries: Vec<Value> = coeffs
            .iter()
            .map(|(l, n)| json!({"weight": l, "coefficient": n}))
            .collect();
        json_text(json!({
            "command": "verlinde",
            "algebra": g.to_string(),
            "level": k,
            "i": a.i,
            "j": a.j,
            "entries": entries,
            "residual": round12(residual),
        }))
    } else {
        let rows: Vec<Vec<String>> = coeffs.iter().map(|(l, n)| vec![l.to_string(), n.to_string()]).collect();
        format!(
            "fusion {} x {} of {g} at level {k}\n{}residual: {residual:.3e}\n",
            a.i,
            a.j,
            table(&["l", "N_ij^l"], &rows)
        )
    })
}

/// S-matrix components below this are rounding noise and shown as 0.
const CHOP: f64 = 1e-13;

fn chop(x: f64) -> f64 {
    if x.abs() < CHOP {
        0.0
    } else {
        round12(x)
    }
}

fn fmt_complex(re: f64, im: f64) -> String {
    let (re, im) = (chop(re), chop(im));
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn cmd_smatrix(a: &SmatrixArgs) -> Result<String, Failure> {
    let g = build_algebra(&a.algebra)?;
    let k = a.level.for_algebra(&g)?;
    let smat = SMatrix::new(&g, &k)?;
    let n = smat.len();
    let unitarity = smat.unitarity_residual();
    let symmetry = smat.symmetry_residual();
    Ok(if a.json {
        let rows: Vec<Value> = (0..n)
            .map(|r| {
                Value::Array(
                    (0..n)
                        .map(|c| {
                            let z = smat.at(r, c);
                            json!([chop(z.re), chop(z.im)])
                        })
                        .collect(),
                )
            })
            .collect();
        json_text(json!({
            "command": "smatrix",
            "algebra": g.to_string(),
            "level": k,
            "weights": smat.weights(),
            "entries": rows,
            "unitarity_residual": round12(unitarity),
            "symmetry_residual": round12(symmetry),
        }))
    } else {
        let mut header = vec!["".to_string()];
        header.extend(smat.weights().iter().map(Weight::to_string));
        let rows: Vec<Vec<String>> = (0..n)
            .map(|r| {
                let mut row = vec![smat.weights()[r].to_string()];
                row.extend((0..n).map(|c| {
                    let z = smat.at(r, c);
                    fmt_complex(z.re, z.im)
                }));
                row
            })
            .collect();
        let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
        format!(
            "S-matrix of {g} at level {k} ({n} integrable weights)\n{}unitarity residual: {unitarity:.3e}\nsymmetry residual: {symmetry:.3e}\n",
            table(&hdr, &rows)
        )
    })
}

fn cmd_weights(a: &WeightsArgs) -> Result<String, Failure> {
    let g = build_algebra(&a.algebra)?;
    let ws = weight_system(&g, &a.weight)?;
    Ok(if a.json {
        let entries: Vec<Value> = ws
            .iter()
            .map(|(w, m)| json!({"weight": w, "multiplicity": m}))
            .collect();
        json_text(json!({
            "command": "weights",
            "algebra": g.to_string(),
            "highest_weight": a.weight,
            "dim": ws.dim(),
            "distinct": ws.len(),
            "entries": entries,
        }))
    } else {
        let rows: Vec<Vec<String>> = ws.iter().map(|(w, m)| vec![w.to_string(), m.to_string()]).collect();
        format!(
            "weights of {} ({g})\n{}{} weights, dim {}\n",
            a.weight,
            table(&["weight", "mult"], &rows),
            ws.len(),
            ws.dim()
        )
    })
}

fn cmd_nimrep(a: &NimrepArgs) -> Result<String, Failure> {
    let emb = a.source.load()?;
    emb.g().check_rank(&a.weight.0)?;
    let lo = LevelVector::uniform(emb.p(), a.window.lo);
    let window: Vec<Weight> = level_window(emb.p(), a.window.hi)?
        .into_iter()
        .filter(|w| LevelVector(level_of(emb.p(), w).expect("rank")).dominates(&lo))
        .collect();
    let n = nim_window(&emb, &a.weight, &window)?;
    let report = match &a.verify_with {
        Some(j) => {
            emb.g().check_rank(&j.0)?;
            let margin = match a.margin {
                Some(m) => m,
                None => {
                    let bi = level_bound(&emb, &a.weight)?;
                    let bj = level_bound(&emb, j)?;
                    bi.0.iter().chain(&bj.0).copied().max().unwrap_or(0)
                }
            };
            if a.window.lo != 0 {
                return Err(Error::Window("axiom checks need a window starting at level 0".into()).into());
            }
            if margin < 0 || margin > a.window.hi {
                return Err(Error::Window(format!("margin {margin} does not fit the window 0..{}", a.window.hi)).into());
            }
            Some((j.clone(), verify_nim(&emb, &a.weight, j, a.window.hi - margin, margin)?))
        }
        None => None,
    };
    let text = if a.json {
        let mut v = json!({
            "command": "nimrep",
            "embedding": emb.name(),
            "source": a.weight,
            "window": n.window,
            "entries": n.entries,
            "truncated_rows": n.truncated,
        });
        if let Some((j, r)) = &report {
            v["verify"] = json!({"with": j, "report": r, "passes": r.passes()});
        }
        json_text(v)
    } else {
        let mut header = vec!["b \\ a".to_string()];
        header.extend(n.window.iter().map(Weight::to_string));
        let rows: Vec<Vec<String>> = (0..n.window.len())
            .map(|b| {
                let mark = if n.truncated[b] { "*" } else { "" };
                let mut row = vec![format!("{}{mark}", n.window[b])];
                row.extend(n.entries[b].iter().map(u64::to_string));
                row
            })
            .collect();
        let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut s = format!(
            "NIM-rep n_{} along {} on levels {}..{}\n{}",
            a.weight,
            emb.name(),
            a.window.lo,
            a.window.hi,
            table(&hdr, &rows)
        );
        if n.truncated.iter().any(|&t| t) {
            s.push_str("* row has entries outside the window\n");
        }
        if let Some((j, r)) = &report {
            s.push_str(&format!(
                "axioms with j = {j}: interior {} of {} weights, product violation {}, transpose violation {} ({})\n",
                r.interior_size,
                r.window_size,
                r.product_violation,
                r.transpose_violation,
                if r.passes() { "ok" } else { "FAILED" }
            ));
        }
        s
    };
    match &report {
        Some((_, r)) if !r.passes() => Err(Failure {
            code: EXIT_NUMERICAL,
            message: "NIM axioms violated".into(),
            partial: Some(text),
        }),
        _ => Ok(text),
    }
}

fn cmd_nimrep_a2(a: &NimrepA2Args) -> Result<String, Failure> {
    let k = a.level;
    let tw = TwistedA2::new(k)?;
    let a2 = build_algebra("A2")?;
    a2.check_rank(&a.weight.0)?;
    if a.map == LabelMap::Raw {
        let m = tw.matrix(&a.weight)?;
        let labels: Vec<String> = tw.labels().iter().map(ToString::to_string).collect();
        return Ok(if a.json {
            let vals: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|e| e.value).collect()).collect();
            let res = m.iter().flatten().map(|e| e.residual).fold(0.0, f64::max);
            json_text(json!({
                "command": "nimrep-a2",
                "level": k,
                "source": a.weight,
                "map": "raw",
                "labels": labels,
                "entries": vals,
                "residual": round12(res),
            }))
        } else {
            let mut header = vec!["beta \\ alpha".to_string()];
            header.extend(labels.iter().cloned());
            let rows: Vec<Vec<String>> = m
                .iter()
                .enumerate()
                .map(|(b, r)| {
                    let mut row = vec![labels[b].clone()];
                    row.extend(r.iter().map(|e| e.value.to_string()));
                    row
                })
                .collect();
            let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
            format!("twisted A2 NIM-rep n_{} at level {k}\n{}", a.weight, table(&hdr, &rows))
        });
    }
    let (emb, weights, label_of): (Embedding, Vec<i64>, Box<dyn Fn(i64) -> Result<_, Error>>) = match a.map {
        LabelMap::Psi => (
            catalog_lookup("A1-in-A2-xe1")?,
            (0..=k / 2).collect(),
            Box::new(move |x| psi(k, x)),
        ),
        _ => (
            catalog_lookup("A1-in-A2-xe4")?,
            (0..=k).step_by(2).collect(),
            Box::new(move |x| psi_prime(k, x)),
        ),
    };
    let table_b = branch_rs(&emb, &a.weight)?;
    let bound = level_bound(&emb, &a.weight)?;
    let stable = k >= 2 * bound.0[0];
    let origin = label_of(0)?;
    let mut rows = Vec::new();
    for &x in &weights {
        let e = tw.entry(&a.weight, &label_of(x)?, &origin)?;
        rows.push((x, label_of(x)?, e, table_b.get(&Weight(vec![x]))));
    }
    let map_name = if a.map == LabelMap::Psi { "psi" } else { "psiprime" };
    Ok(if a.json {
        let entries: Vec<Value> = rows
            .iter()
            .map(|(x, l, e, b)| {
                json!({"a": x, "label": l.to_string(), "value": e.value, "residual": round12(e.residual), "branching": b})
            })
            .collect();
        json_text(json!({
            "command": "nimrep-a2",
            "level": k,
            "source": a.weight,
            "map": map_name,
            "embedding": emb.name(),
            "level_bound": bound,
            "stable": stable,
            "entries": entries,
        }))
    } else {
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|(x, l, e, b)| vec![x.to_string(), l.to_string(), e.value.to_string(), b.to_string()])
            .collect();
        format!(
            "twisted A2 NIM-rep n_{} at level {k}, row {} ({map_name}), compared with {}\n{}{}\n",
            a.weight,
            origin,
            emb.name(),
            table(&["a", "label", "n", "b_i^a"], &body),
            if stable {
                format!("k >= 2 x level bound {bound}: entries expected to equal b_i^a")
            } else {
                format!("k < 2 x level bound {bound}: entries need not equal b_i^a yet")
            }
        )
    })
}

fn quad_out(name: &str, args: &IntegralTriple, r: QuadratureResult) -> String {
    if args.json {
        json_text(json!({
            "command": "integral",
            "kind": name,
            "arguments": [args.x, args.y, args.a],
            "value": round12(r.value),
            "rounded": r.rounded,
            "residual": round12(r.residual),
            "points": r.points,
        }))
    } else {
        format!(
            "{name}({}, {}, {}) = {} (value {:.12}, residual {:.3e}, {} points)\n",
            args.x, args.y, args.a, r.rounded, r.value, r.residual, r.points
        )
    }
}

fn cmd_integral(a: &IntegralArgs) -> Result<String, Failure> {
    Ok(match &a.kind {
        IntegralKind::A1Tensor(t) => quad_out("a1-tensor", t, integral_a1_tensor(t.x, t.y, t.a, t.tol)?),
        IntegralKind::A1InA2(t) => quad_out("a1-in-a2", t, integral_a1_in_a2(t.x, t.y, t.a, t.tol)?),
    })
}

fn cmd_catalog(a: &CatalogArgs) -> Result<String, Failure> {
    let CatalogAction::List { json } = a.action;
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for e in catalog() {
        let x = embedding_index(&e)?;
        values.push(json!({
            "name": e.name(),
            "g": e.g().to_string(),
            "p": e.p().to_string(),
            "P": e.matrix(),
            "index": x.to_string(),
            "note": e.note(),
        }));
        let m: Vec<String> = e
            .matrix()
            .iter()
            .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        rows.push(vec![
            e.name().to_string(),
            format!("{} -> {}", e.p(), e.g()),
            format!("[{}]", m.join("; ")),
            x.to_string(),
            e.note().to_string(),
        ]);
    }
    Ok(if json {
        json_text(json!({"command": "catalog", "embeddings": values}))
    } else {
        table(&["name", "p -> g", "P", "x_e", "note"], &rows)
    })
}
