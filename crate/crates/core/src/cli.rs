//! Command-line front end: argument parsing, dispatch and output rendering.
//!
//! Exit status: 0 on success, 1 when a property check reports false, 2 on
//! usage or input errors.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::conjugate::{CandidateUniverse, Conjugator, PairedPoint};
use crate::error::{Error, Result};
use crate::fitzpatrick::{fitzpatrick_inf, fitzpatrick_sup, fitzpatrick_via_conjugate, level_set_report, FitzQuery};
use crate::geometry::{geodesic_point, quasilinearization, SpaceHandle};
use crate::io::{self, Loader};
use crate::monotone::{
    f_property_check, flatness_check, is_maximal_relative, is_monotone, monotone_polar_indices, OperatorGraph,
};
use crate::sampling;
use crate::tolerance::{DEFAULT_LAMBDA_GRID, PROBE_SEED};
use crate::worked_examples::{run_worked_examples, ExampleConfig};
use crate::ExtReal;

#[derive(Debug, Parser)]
#[command(name = "hadamard", version, about = "Convex analysis on Hadamard spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Comparison tolerance (default: 1e-9, or 1e-7 in hyperbolic space)
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Seed for sampled inputs
    #[arg(long, global = true, default_value_t = PROBE_SEED)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// File with the candidate universe: {"pairs": [..]} or an array of pairs
    #[arg(long, global = true)]
    pub universe: Option<PathBuf>,

    /// Comma-separated λ values in [0, 1]
    #[arg(long, global = true, value_delimiter = ',')]
    pub lambda_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasilinearization <xy→, uv→> of {"xy": [x, y], "uv": [u, v]}
    Quasi { input: String },
    /// Distance between {"x", "y"}
    Distance { input: String },
    /// Geodesic point (1-t)x ⊕ ty from {"x", "y", "t"}
    Geodesic { input: String },
    /// Dual pairing <xd, bv> from {"xd", "bv": [a, b]}
    Pair { input: String },
    /// p-Fenchel conjugate of {"table"} at {"query": {"x", "xd"}}
    Conjugate { input: String },
    /// p-Fitzpatrick transform of a graph at {"p", "query"}
    Fitz {
        input: Option<String>,
        /// Graph file ({"space", "pairs"}); overrides the instance's "graph"
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Monotonicity of {"graph"}
    MonotoneCheck { input: String },
    /// Monotone polar of {"m"} (or {"graph"}) inside the universe
    Polar { input: String },
    /// Maximal monotonicity of {"graph"} relative to the universe
    MaximalCheck { input: String },
    /// Equality in the CN-inequality on {"triples"} or {"samples": n} random triples
    Flatness { input: String },
    /// F_l / F_g properties of {"m"} (or {"graph"}) with basepoint {"p"}
    FProperty { input: String },
    /// Membership of {"table"} in Γ◊_p relative to the universe
    GammaCheck { input: String },
    /// Recompute the reference worked examples and compare with their closed forms
    #[command(name = "paper-examples")]
    WorkedExamples,
}

/// Result of one command: the document to print and whether every checked
/// property held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: Value,
    pub holds: bool,
}

impl Outcome {
    fn ok(output: Value) -> Self {
        Self { output, holds: true }
    }

    pub fn exit_code(&self) -> i32 {
        if self.holds {
            0
        } else {
            1
        }
    }
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {path}: {e}")))
    }
}

fn read_json(path: &str) -> Result<Value> {
    io::parse_json(&read_source(path)?)
}

/// A parsed instance file: its space and raw JSON.
struct Instance {
    space: SpaceHandle,
    raw: Value,
}

impl Instance {
    fn load(path: &str) -> Result<Self> {
        let raw = read_json(path)?;
        let space = match raw.get("space") {
            Some(s) => io::parse_space(s)?,
            None => return Err(Error::Schema(vec!["$: missing \"space\"".into()])),
        };
        Ok(Self { space, raw })
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.raw.get(key)
    }

    fn require(&self, l: &mut Loader, key: &str) -> Option<&Value> {
        let v = self.get(key);
        if v.is_none() {
            l.error("$", format!("missing \"{key}\""));
        }
        v
    }
}

fn lambda_grid(opts: &GlobalOpts) -> Result<Vec<f64>> {
    let grid = opts.lambda_grid.clone().unwrap_or_else(|| DEFAULT_LAMBDA_GRID.to_vec());
    if let Some(l) = grid.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::OutOfRange(format!("--lambda-grid value {l} outside [0, 1]")));
    }
    Ok(grid)
}

fn tol(opts: &GlobalOpts, space: &SpaceHandle) -> f64 {
    opts.tol.unwrap_or_else(|| space.default_tolerance())
}

/// Universe from `--universe`, else from the instance's `"universe"` key.
fn load_universe(opts: &GlobalOpts, inst: &Instance, l: &mut Loader) -> Result<Option<CandidateUniverse>> {
    if let Some(path) = &opts.universe {
        let v = read_json(&path.to_string_lossy())?;
        if let Some(s) = v.get("space") {
            let declared = io::parse_space(s)?;
            if declared != inst.space {
                return Err(Error::SpaceMismatch(format!(
                    "universe in {declared}, instance in {}",
                    inst.space
                )));
            }
        }
        return Ok(l.universe(&v, "$universe"));
    }
    Ok(inst.get("universe").and_then(|v| l.universe(v, "$.universe")))
}

fn load_graph(inst: &Instance, l: &mut Loader) -> Option<OperatorGraph> {
    match inst.get("graph") {
        Some(g) => l.graph(g, "$.graph"),
        None if inst.get("pairs").is_some() => l.graph(&inst.raw, "$"),
        None => {
            l.error("$", "missing \"graph\"");
            None
        }
    }
}

/// `"m"` if present, else the graph's pairs.
fn load_m(inst: &Instance, l: &mut Loader) -> Option<Vec<PairedPoint>> {
    match inst.get("m") {
        Some(m) => l.pairs(m, "$.m"),
        None => load_graph(inst, l).map(|g| g.pairs),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Quasi { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let xy = inst.require(&mut l, "xy").and_then(|v| l.bound_vector(v, "$.xy"));
            let uv = inst.require(&mut l, "uv").and_then(|v| l.bound_vector(v, "$.uv"));
            l.finish()?;
            let (xy, uv) = (xy.expect("checked"), uv.expect("checked"));
            Ok(Outcome::ok(
                json!({ "value": io::scalar_json(&quasilinearization(&xy, &uv)?) }),
            ))
        }
        Command::Distance { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let x = inst.require(&mut l, "x").and_then(|v| l.point(v, "$.x"));
            let y = inst.require(&mut l, "y").and_then(|v| l.point(v, "$.y"));
            l.finish()?;
            let d = inst.space.distance(&x.expect("checked"), &y.expect("checked"))?;
            Ok(Outcome::ok(json!({ "value": io::scalar_json(&d) })))
        }
        Command::Geodesic { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let x = inst.require(&mut l, "x").and_then(|v| l.point(v, "$.x"));
            let y = inst.require(&mut l, "y").and_then(|v| l.point(v, "$.y"));
            let t = inst.require(&mut l, "t").and_then(|v| l.scalar(v, "$.t"));
            l.finish()?;
            let m = geodesic_point(&x.expect("checked"), &y.expect("checked"), &t.expect("checked"))?;
            Ok(Outcome::ok(json!({ "point": io::point_json(&m) })))
        }
        Command::Pair { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let xd = inst.require(&mut l, "xd").and_then(|v| l.dual(v, "$.xd"));
            let bv = inst.require(&mut l, "bv").and_then(|v| l.bound_vector(v, "$.bv"));
            l.finish()?;
            let v = xd.expect("checked").pair(&bv.expect("checked"))?;
            Ok(Outcome::ok(json!({ "value": io::scalar_json(&v) })))
        }
        Command::Conjugate { input } => conjugate_cmd(opts, input),
        Command::Fitz { input, graph } => fitz_cmd(opts, input.as_deref(), graph.as_deref()),
        Command::MonotoneCheck { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let g = load_graph(&inst, &mut l);
            l.finish()?;
            let r = is_monotone(&g.expect("checked"), tol(opts, &inst.space))?;
            Ok(Outcome {
                holds: r.holds,
                output: io::round_floats(serde_json::to_value(&r).expect("serializable")),
            })
        }
        Command::Polar { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let m = load_m(&inst, &mut l);
            let u = load_universe(opts, &inst, &mut l)?;
            if u.is_none() && !l.has_errors() {
                l.error("$", "missing universe (\"universe\" key or --universe)");
            }
            l.finish()?;
            let (m, u) = (m.expect("checked"), u.expect("checked"));
            let idx = monotone_polar_indices(&m, &u, tol(opts, &inst.space))?;
            let pairs: Vec<Value> = idx.iter().map(|&i| io::paired_json(&u.pairs[i])).collect();
            Ok(Outcome::ok(json!({
                "indices": idx,
                "pairs": pairs,
                "universe": u.label(),
            })))
        }
        Command::MaximalCheck { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let g = load_graph(&inst, &mut l);
            let u = load_universe(opts, &inst, &mut l)?;
            if u.is_none() && !l.has_errors() {
                l.error("$", "missing universe (\"universe\" key or --universe)");
            }
            l.finish()?;
            let u = u.expect("checked");
            let r = is_maximal_relative(&g.expect("checked"), &u, tol(opts, &inst.space))?;
            let mut out = serde_json::to_value(&r).expect("serializable");
            out["universe"] = Value::String(u.label());
            Ok(Outcome {
                holds: r.holds,
                output: io::round_floats(out),
            })
        }
        Command::Flatness { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let triples = match inst.get("triples") {
                Some(Value::Array(items)) => {
                    let mut out = Vec::new();
                    for (i, t) in items.iter().enumerate() {
                        let path = format!("$.triples[{i}]");
                        match t.as_array().map(Vec::as_slice) {
                            Some([x, y, z]) => {
                                let x = l.point(x, &format!("{path}[0]"));
                                let y = l.point(y, &format!("{path}[1]"));
                                let z = l.point(z, &format!("{path}[2]"));
                                if let (Some(x), Some(y), Some(z)) = (x, y, z) {
                                    out.push((x, y, z));
                                }
                            }
                            _ => l.error(&path, "expected [x, y, z]"),
                        }
                    }
                    out
                }
                Some(_) => {
                    l.error("$.triples", "expected an array of [x, y, z]");
                    Vec::new()
                }
                None => {
                    let n = inst.get("samples").and_then(Value::as_u64).unwrap_or(100) as usize;
                    let mut rng = sampling::rng(opts.seed);
                    (0..n)
                        .map(|_| {
                            let mut s = || sampling::random_point(&inst.space, &mut rng);
                            (s(), s(), s())
                        })
                        .collect()
                }
            };
            l.finish()?;
            let grid = lambda_grid(opts)?;
            let r = flatness_check(&inst.space, &triples, &grid, tol(opts, &inst.space))?;
            Ok(Outcome {
                holds: r.holds,
                output: io::round_floats(serde_json::to_value(&r).expect("serializable")),
            })
        }
        Command::FProperty { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let m = load_m(&inst, &mut l);
            let p = inst.require(&mut l, "p").and_then(|v| l.point(v, "$.p"));
            l.finish()?;
            let grid = lambda_grid(opts)?;
            let r = f_property_check(
                &m.expect("checked"),
                &p.expect("checked"),
                &grid,
                tol(opts, &inst.space),
            )?;
            let mut out = serde_json::to_value(&r).expect("serializable");
            out["holds"] = Value::Bool(r.holds());
            Ok(Outcome {
                holds: r.holds(),
                output: io::round_floats(out),
            })
        }
        Command::GammaCheck { input } => {
            let inst = Instance::load(input)?;
            let mut l = Loader::new(inst.space);
            let h = inst.require(&mut l, "table").and_then(|v| l.table(v, "$.table"));
            let u = load_universe(opts, &inst, &mut l)?;
            l.finish()?;
            let h = h.expect("checked");
            let u = u.unwrap_or_else(|| CandidateUniverse::new(h.domain()));
            let grid = lambda_grid(opts)?;
            let p = h.p.clone();
            let r = crate::conjugate::gamma_p_membership(&h, &p, &u, &grid, tol(opts, &inst.space))?;
            Ok(Outcome {
                holds: r.holds,
                output: io::round_floats(serde_json::to_value(&r).expect("serializable")),
            })
        }
        Command::WorkedExamples => {
            let rows = run_worked_examples(&ExampleConfig::default())?;
            let all = rows.iter().all(|r| r.pass);
            Ok(Outcome {
                holds: all,
                output: json!({ "rows": rows, "all_pass": all }),
            })
        }
    }
}

fn conjugate_cmd(opts: &GlobalOpts, input: &str) -> Result<Outcome> {
    let inst = Instance::load(input)?;
    let mut l = Loader::new(inst.space);
    let h = inst.require(&mut l, "table").and_then(|v| l.table(v, "$.table"));
    let q = inst.require(&mut l, "query").and_then(|v| l.paired(v, "$.query"));
    let p = inst.get("p").and_then(|v| l.point(v, "$.p"));
    let u = load_universe(opts, &inst, &mut l)?;
    l.finish()?;
    let (h, q) = (h.expect("checked"), q.expect("checked"));
    let p = p.unwrap_or_else(|| h.p.clone());
    let u = u.unwrap_or_else(|| CandidateUniverse::new(h.domain()));
    let conj = Conjugator::new(&h, &p, &u, tol(opts, &inst.space))?;
    let v = conj.eval_with_argmax(&q.xd, &q.x)?;
    Ok(Outcome::ok(json!({
        "value": io::ext_real_json(&v.value),
        "argmax": v.argmax,
        "universe": u.label(),
    })))
}

fn fitz_cmd(opts: &GlobalOpts, input: Option<&str>, graph_path: Option<&Path>) -> Result<Outcome> {
    let graph_doc = graph_path.map(|p| read_json(&p.to_string_lossy())).transpose()?;
    let inst = match (input, &graph_doc) {
        (Some(path), _) => Instance::load(path)?,
        (None, Some(doc)) => match doc.get("space") {
            Some(s) => Instance {
                space: io::parse_space(s)?,
                raw: json!({}),
            },
            None => return Err(Error::Schema(vec!["$graph: missing \"space\"".into()])),
        },
        (None, None) => return Err(Error::Parse("fitz needs an instance file or --graph".into())),
    };
    let mut l = Loader::new(inst.space);
    let g = match &graph_doc {
        Some(doc) => l.graph(doc, "$graph"),
        None => load_graph(&inst, &mut l),
    };
    let p = inst.get("p").and_then(|v| l.point(v, "$.p"));
    let q = inst.get("query").and_then(|v| l.paired(v, "$.query"));
    let u = load_universe(opts, &inst, &mut l)?;
    l.finish()?;
    let g = g.expect("checked");
    let t = tol(opts, &inst.space);

    let Some(p) = p else {
        if g.is_empty() && q.is_none() && u.is_none() {
            // Φ ≡ -∞ for the empty graph, whatever the query
            return Ok(Outcome::ok(json!({
                "value": io::ext_real_json(&ExtReal::NegInf),
                "universe": "none",
            })));
        }
        return Err(Error::Schema(vec!["$: missing \"p\"".into()]));
    };
    let mut out = Map::new();
    if let Some(q) = q {
        let query = FitzQuery::new(p.clone(), q)?;
        let sup = fitzpatrick_sup(&g, &query)?;
        let inf = fitzpatrick_inf(&g, &query)?;
        let conj = fitzpatrick_via_conjugate(&g, &query, t)?;
        let agree = sup.approx_eq(&inf, t) && sup.approx_eq(&conj, t);
        out.insert("value".into(), io::ext_real_json(&sup));
        out.insert(
            "form_agreement".into(),
            json!({
                "sup": io::ext_real_json(&sup),
                "inf": io::ext_real_json(&inf),
                "conjugate": io::ext_real_json(&conj),
                "agree": agree,
            }),
        );
    } else if g.is_empty() {
        out.insert("value".into(), io::ext_real_json(&ExtReal::NegInf));
    }
    match &u {
        Some(u) => {
            let values: Vec<Value> = u
                .pairs
                .iter()
                .map(|q| {
                    fitzpatrick_sup(
                        &g,
                        &FitzQuery {
                            p: p.clone(),
                            q: q.clone(),
                        },
                    )
                    .map(|v| io::ext_real_json(&v))
                })
                .collect::<Result<_>>()?;
            out.insert("universe_values".into(), Value::Array(values));
            let report = level_set_report(&g, &p, u, t)?;
            out.insert(
                "level_sets".into(),
                io::round_floats(serde_json::to_value(&report).expect("serializable")),
            );
            out.insert("universe".into(), Value::String(u.label()));
        }
        None => {
            out.insert("universe".into(), Value::String("graph (exact)".into()));
        }
    }
    if !out.contains_key("value") && u.is_none() {
        return Err(Error::Schema(vec!["$: fitz needs \"query\" or a universe".into()]));
    }
    Ok(Outcome::ok(Value::Object(out)))
}

/// Renders an outcome as pretty JSON or CSV. Documents with a `"rows"`
/// array become one CSV record per row; other documents become
/// `key,value` records with nested values JSON-encoded.
pub fn render(output: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(output).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let cell = |v: &Value| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            if let Some(Value::Array(rows)) = output.get("rows") {
                if let Some(Value::Object(first)) = rows.first() {
                    let keys: Vec<&String> = first.keys().collect();
                    w.write_record(keys.iter().map(|k| k.as_str()))
                        .expect("in-memory write");
                    for row in rows {
                        w.write_record(keys.iter().map(|k| cell(&row[k.as_str()])))
                            .expect("in-memory write");
                    }
                }
            } else if let Value::Object(m) = output {
                w.write_record(["key", "value"]).expect("in-memory write");
                for (k, v) in m {
                    w.write_record([k.clone(), cell(v)]).expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
    }
}

/// Parses `args`, runs the command and returns `(exit status, stdout, stderr)`.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => (
            outcome.exit_code(),
            render(&outcome.output, cli.opts.format),
            String::new(),
        ),
        Err(e) => (2, String::new(), format!("error: {e}\n")),
    }
}
