//! JSON input and output.
//!
//! Input shapes:
//!
//! ```text
//! space    {"kind": "euclidean" | "rtree" | "hyperbolic", "dim": n}
//! number   JSON number, or a string "n", "n/d" (exact) or "1.5e-3" (float)
//! point    [c1, .., cn] (euclidean), [c1, .., c(n+1)] (hyperbolic), [branch, t] (rtree)
//! dual     {"terms": [{"coeff": number, "a": point, "b": point}, ..]}
//! pair     {"x": point, "xd": dual}
//! graph    {"space": space, "pairs": [pair, ..]}
//! table    {"p": point, "entries": [{"x": point, "xd": dual, "value": number | "+inf" | "-inf"}, ..]}
//! ```
//!
//! Schema problems are collected (the first ten are reported) instead of
//! stopping at the first one.

use serde_json::{Map, Value};

use crate::conjugate::{CandidateUniverse, FunctionTable, PairedPoint};
use crate::dual::{DualTerm, DualVector};
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::geometry::{BoundVector, Point, SpaceHandle, SpaceKind};
use crate::monotone::OperatorGraph;
use crate::scalar::{round_sig, Scalar};
use crate::spaces::{make_point, Payload};

pub const MAX_REPORTED_ERRORS: usize = 10;

/// Parses JSON text, reporting syntax errors with line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

pub fn parse_space(v: &Value) -> Result<SpaceHandle> {
    let mut l = Loader::without_space();
    let space = l.space(v, "$.space");
    l.finish()?;
    Ok(space.expect("no errors recorded"))
}

/// Walks JSON values and converts them to domain objects, recording every
/// schema violation with its JSON path.
pub struct Loader {
    space: Option<SpaceHandle>,
    errors: Vec<String>,
}

impl Loader {
    pub fn new(space: SpaceHandle) -> Self {
        Self {
            space: Some(space),
            errors: Vec::new(),
        }
    }

    fn without_space() -> Self {
        Self {
            space: None,
            errors: Vec::new(),
        }
    }

    pub fn error(&mut self, path: &str, msg: impl AsRef<str>) {
        self.errors.push(format!("{path}: {}", msg.as_ref()));
    }

    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty()
    }

    /// Fails with the first ten recorded problems, if any.
    pub fn finish(self) -> Result<()> {
        if self.errors.is_empty() {
            return Ok(());
        }
        let total = self.errors.len();
        let mut shown: Vec<String> = self.errors.into_iter().take(MAX_REPORTED_ERRORS).collect();
        if total > MAX_REPORTED_ERRORS {
            shown.push(format!("... {} more", total - MAX_REPORTED_ERRORS));
        }
        Err(Error::Schema(shown))
    }

    pub fn space(&mut self, v: &Value, path: &str) -> Option<SpaceHandle> {
        let Some(obj) = v.as_object() else {
            self.error(path, "expected {\"kind\": .., \"dim\": ..}");
            return None;
        };
        let kind = match obj.get("kind").and_then(Value::as_str) {
            Some("euclidean") => SpaceKind::Euclidean,
            Some("rtree") => SpaceKind::RTree,
            Some("hyperbolic") => SpaceKind::Hyperbolic,
            other => {
                self.error(
                    &format!("{path}.kind"),
                    format!("expected \"euclidean\", \"rtree\" or \"hyperbolic\", got {other:?}"),
                );
                return None;
            }
        };
        let dim = match (kind, obj.get("dim")) {
            (SpaceKind::RTree, None) => 1,
            (_, Some(d)) if d.as_u64().is_some() => d.as_u64().unwrap_or(0) as usize,
            _ => {
                self.error(&format!("{path}.dim"), "expected a positive integer");
                return None;
            }
        };
        match SpaceHandle::new(kind, dim) {
            Ok(s) => Some(s),
            Err(e) => {
                self.error(path, e.to_string());
                None
            }
        }
    }

    pub fn scalar(&mut self, v: &Value, path: &str) -> Option<Scalar> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(Scalar::from(i))
                } else if let Some(f) = n.as_f64() {
                    Some(Scalar::from(f))
                } else {
                    self.error(path, format!("unsupported number {n}"));
                    None
                }
            }
            Value::String(s) => match s.parse::<Scalar>() {
                Ok(x) => Some(x),
                Err(e) => {
                    self.error(path, e.to_string());
                    None
                }
            },
            _ => {
                self.error(path, "expected a number or a numeric string");
                None
            }
        }
    }

    pub fn ext_real(&mut self, v: &Value, path: &str) -> Option<ExtReal> {
        match v.as_str() {
            Some("+inf") | Some("inf") => Some(ExtReal::PosInf),
            Some("-inf") => Some(ExtReal::NegInf),
            _ => self.scalar(v, path).map(ExtReal::Finite),
        }
    }

    fn the_space(&mut self, path: &str) -> Option<SpaceHandle> {
        if self.space.is_none() {
            self.error(path, "no space declared");
        }
        self.space
    }

    pub fn point(&mut self, v: &Value, path: &str) -> Option<Point> {
        let space = self.the_space(path)?;
        let Some(items) = v.as_array() else {
            self.error(path, "expected an array of coordinates");
            return None;
        };
        let payload = match space.kind {
            SpaceKind::RTree => {
                if items.len() != 2 {
                    self.error(
                        path,
                        format!("rtree point needs [branch, t], got {} entries", items.len()),
                    );
                    return None;
                }
                let Some(branch) = items[0].as_u64() else {
                    self.error(&format!("{path}[0]"), "branch must be a positive integer");
                    return None;
                };
                let t = self.scalar(&items[1], &format!("{path}[1]"))?;
                Payload::Branch(branch, t)
            }
            _ => {
                let mut coords = Vec::with_capacity(items.len());
                let mut ok = true;
                for (i, c) in items.iter().enumerate() {
                    match self.scalar(c, &format!("{path}[{i}]")) {
                        Some(s) => coords.push(s),
                        None => ok = false,
                    }
                }
                if !ok {
                    return None;
                }
                let want = if space.kind == SpaceKind::Hyperbolic {
                    space.dim + 1
                } else {
                    space.dim
                };
                if coords.len() != want {
                    self.error(
                        path,
                        format!("expected {want} coordinates for {space}, got {}", coords.len()),
                    );
                    return None;
                }
                Payload::Vector(coords)
            }
        };
        match make_point(&space, payload) {
            Ok(p) => Some(p),
            Err(e) => {
                self.error(path, e.to_string());
                None
            }
        }
    }

    pub fn bound_vector(&mut self, v: &Value, path: &str) -> Option<BoundVector> {
        match v.as_array().map(Vec::as_slice) {
            Some([a, b]) => {
                let a = self.point(a, &format!("{path}[0]"));
                let b = self.point(b, &format!("{path}[1]"));
                Some(BoundVector::new(a?, b?).expect("points share the loader's space"))
            }
            _ => {
                self.error(path, "expected [tail, head]");
                None
            }
        }
    }

    pub fn dual(&mut self, v: &Value, path: &str) -> Option<DualVector> {
        let space = self.the_space(path)?;
        let Some(terms) = v.get("terms").and_then(Value::as_array) else {
            self.error(path, "expected {\"terms\": [..]}");
            return None;
        };
        let mut out = Vec::with_capacity(terms.len());
        let mut ok = true;
        for (i, t) in terms.iter().enumerate() {
            let tp = format!("{path}.terms[{i}]");
            let coeff = match t.get("coeff") {
                Some(c) => self.scalar(c, &format!("{tp}.coeff")),
                None => {
                    self.error(&tp, "missing \"coeff\"");
                    None
                }
            };
            let a = self.field_point(t, "a", &tp);
            let b = self.field_point(t, "b", &tp);
            match (coeff, a, b) {
                (Some(coeff), Some(a), Some(b)) => out.push(DualTerm {
                    coeff,
                    bv: BoundVector { tail: a, head: b },
                }),
                _ => ok = false,
            }
        }
        if !ok {
            return None;
        }
        Some(DualVector::new(space, out).expect("terms share the loader's space"))
    }

    fn field_point(&mut self, obj: &Value, key: &str, path: &str) -> Option<Point> {
        match obj.get(key) {
            Some(v) => self.point(v, &format!("{path}.{key}")),
            None => {
                self.error(path, format!("missing \"{key}\""));
                None
            }
        }
    }

    pub fn paired(&mut self, v: &Value, path: &str) -> Option<PairedPoint> {
        let x = self.field_point(v, "x", path);
        let xd = match v.get("xd") {
            Some(d) => self.dual(d, &format!("{path}.xd")),
            None => {
                self.error(path, "missing \"xd\"");
                None
            }
        };
        Some(PairedPoint::new(x?, xd?).expect("same space"))
    }

    /// A list of pairs, given either as an array or as `{"pairs": [..]}`.
    pub fn pairs(&mut self, v: &Value, path: &str) -> Option<Vec<PairedPoint>> {
        let (items, base) = match v {
            Value::Array(items) => (items, path.to_string()),
            Value::Object(o) => match o.get("pairs").and_then(Value::as_array) {
                Some(items) => (items, format!("{path}.pairs")),
                None => {
                    self.error(path, "expected an array of pairs or {\"pairs\": [..]}");
                    return None;
                }
            },
            _ => {
                self.error(path, "expected an array of pairs");
                return None;
            }
        };
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match self.paired(item, &format!("{base}[{i}]")) {
                Some(q) => out.push(q),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    pub fn graph(&mut self, v: &Value, path: &str) -> Option<OperatorGraph> {
        let space = self.the_space(path)?;
        if let Some(s) = v.get("space") {
            let declared = self.space(s, &format!("{path}.space"))?;
            if declared != space {
                self.error(
                    &format!("{path}.space"),
                    format!("graph declared in {declared}, instance in {space}"),
                );
                return None;
            }
        }
        let pairs = self.pairs(v, path)?;
        Some(OperatorGraph::new(space, pairs).expect("same space"))
    }

    pub fn universe(&mut self, v: &Value, path: &str) -> Option<CandidateUniverse> {
        self.pairs(v, path).map(CandidateUniverse::new)
    }

    pub fn table(&mut self, v: &Value, path: &str) -> Option<FunctionTable> {
        let p = self.field_point(v, "p", path);
        let Some(entries) = v.get("entries").and_then(Value::as_array) else {
            self.error(path, "expected \"entries\": [..]");
            return None;
        };
        let mut out = Vec::with_capacity(entries.len());
        let mut ok = true;
        for (i, e) in entries.iter().enumerate() {
            let ep = format!("{path}.entries[{i}]");
            let q = self.paired(e, &ep);
            let value = match e.get("value") {
                Some(val) => self.ext_real(val, &format!("{ep}.value")),
                None => {
                    self.error(&ep, "missing \"value\"");
                    None
                }
            };
            match (q, value) {
                (Some(q), Some(value)) => out.push((q, value)),
                _ => ok = false,
            }
        }
        if !ok {
            return None;
        }
        Some(FunctionTable::new(p?, out).expect("same space"))
    }
}

/// Exact integers as numbers, other exact values as "n/d", floats rounded to
/// 12 significant digits.
pub fn scalar_json(v: &Scalar) -> Value {
    match v {
        Scalar::Exact(r) if r.is_integer() => match v.to_string().parse::<i64>() {
            Ok(i) => Value::from(i),
            Err(_) => Value::String(v.to_string()),
        },
        Scalar::Exact(_) => Value::String(v.to_string()),
        Scalar::Float(f) => float_json(*f),
    }
}

pub fn float_json(f: f64) -> Value {
    if f.is_nan() {
        return Value::String("nan".into());
    }
    if f == f64::INFINITY {
        return Value::String("+inf".into());
    }
    if f == f64::NEG_INFINITY {
        return Value::String("-inf".into());
    }
    let r = round_sig(f, 12);
    serde_json::Number::from_f64(if r == 0.0 { 0.0 } else { r }).map_or(Value::Null, Value::Number)
}

pub fn ext_real_json(v: &ExtReal) -> Value {
    match v {
        ExtReal::NegInf => Value::String("-inf".into()),
        ExtReal::PosInf => Value::String("+inf".into()),
        ExtReal::Finite(s) => scalar_json(s),
    }
}

pub fn point_json(p: &Point) -> Value {
    match p {
        Point::Euclidean(v) => Value::Array(v.iter().map(scalar_json).collect()),
        Point::Hyperbolic(v) => Value::Array(v.iter().map(|c| float_json(*c)).collect()),
        Point::RTree(q) => Value::Array(vec![Value::from(q.branch()), scalar_json(q.t())]),
    }
}

pub fn dual_json(d: &DualVector) -> Value {
    let terms = d
        .terms()
        .iter()
        .map(|t| {
            let mut m = Map::new();
            m.insert("coeff".into(), scalar_json(&t.coeff));
            m.insert("a".into(), point_json(&t.bv.tail));
            m.insert("b".into(), point_json(&t.bv.head));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("terms".into(), Value::Array(terms));
    Value::Object(m)
}

pub fn paired_json(q: &PairedPoint) -> Value {
    let mut m = Map::new();
    m.insert("x".into(), point_json(&q.x));
    m.insert("xd".into(), dual_json(&q.xd));
    Value::Object(m)
}

/// Rewrites every float in a serialized value to 12 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => float_json(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}
