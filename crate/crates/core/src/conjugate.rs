//! The p-coupling `π_p(x, x◊) = <x◊, px→>`, indicator functions, the
//! p-Fenchel conjugate
//!
//! ```text
//! h◊_p(x◊, x) = sup { <x◊, py→> + <y◊, px→> - h(y, y◊) : (y, y◊) ∈ U }
//! ```
//!
//! over a finite candidate universe `U`, and membership tests for the class
//! Γ◊_p of functions fixed by `h ↦ (h + ι_{h ≤ π_p})◊_p ∘ r`.
//!
//! Everything that depends on `U` is only meaningful relative to it. Pairs of
//! `U` missing from a function table are treated as `h = +∞`.

use std::fmt;

use serde::Serialize;

use crate::dual::{dual_add, dual_scale, DualVector};
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::geometry::{ensure_same_space, geodesic_point, Point, SpaceHandle};
use crate::index::PairIndex;
use crate::report::Witness;
use crate::scalar::Scalar;

/// An element `(x, x◊)` of `X × X◊`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedPoint {
    pub x: Point,
    pub xd: DualVector,
}

impl PairedPoint {
    pub fn new(x: Point, xd: DualVector) -> Result<Self> {
        if x.space() != xd.space() {
            return Err(Error::SpaceMismatch(format!(
                "point in {} paired with dual in {}",
                x.space(),
                xd.space()
            )));
        }
        Ok(Self { x, xd })
    }

    pub fn space(&self) -> SpaceHandle {
        self.x.space()
    }
}

impl fmt::Display for PairedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.xd)
    }
}

/// A function on `X × X◊` given by finitely many values around basepoint `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionTable {
    pub p: Point,
    pub entries: Vec<(PairedPoint, ExtReal)>,
}

impl FunctionTable {
    pub fn new(p: Point, entries: Vec<(PairedPoint, ExtReal)>) -> Result<Self> {
        for (q, _) in &entries {
            ensure_same_space(&p, &q.x)?;
        }
        Ok(Self { p, entries })
    }

    /// Tabulates `f` on every pair of `domain`.
    pub fn from_fn<F>(p: Point, domain: &[PairedPoint], mut f: F) -> Result<Self>
    where
        F: FnMut(&PairedPoint) -> Result<ExtReal>,
    {
        let entries = domain
            .iter()
            .map(|q| Ok((q.clone(), f(q)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, entries)
    }

    pub fn domain(&self) -> Vec<PairedPoint> {
        self.entries.iter().map(|(q, _)| q.clone()).collect()
    }

    pub fn space(&self) -> SpaceHandle {
        self.p.space()
    }

    /// Proper: never `-∞` and finite somewhere.
    pub fn properness_issue(&self) -> Option<String> {
        if let Some((q, _)) = self.entries.iter().find(|(_, v)| *v == ExtReal::NegInf) {
            return Some(format!("value -inf at {q}"));
        }
        if !self.entries.iter().any(|(_, v)| v.is_finite()) {
            return Some("no finite value".into());
        }
        None
    }

    /// Values of the table on each universe pair (`+∞` where absent).
    pub fn values_on(&self, universe: &CandidateUniverse, tol: f64) -> Result<Vec<ExtReal>> {
        let domain = self.domain();
        let context: Vec<&PairedPoint> = universe.pairs.iter().collect();
        let index = PairIndex::new(self.space(), &domain, &context, tol)?;
        universe
            .pairs
            .iter()
            .map(|q| {
                Ok(match index.find(q)? {
                    Some(i) => self.entries[i].1.clone(),
                    None => ExtReal::PosInf,
                })
            })
            .collect()
    }
}

/// Finite stand-in for `X × X◊` over which sups and infs are taken.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CandidateUniverse {
    pub pairs: Vec<PairedPoint>,
}

impl CandidateUniverse {
    pub fn new(pairs: Vec<PairedPoint>) -> Self {
        Self { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Label attached to every universe-dependent output.
    pub fn label(&self) -> String {
        format!("relative to U ({} pairs)", self.pairs.len())
    }
}

/// `π_p(x, x◊) = <x◊, px→>`.
pub fn coupling_pi(p: &Point, q: &PairedPoint) -> Result<Scalar> {
    q.xd.pair_points(p, &q.x)
}

/// `r(x, x◊) = (x◊, x)`.
pub fn swap_r(q: &PairedPoint) -> (DualVector, Point) {
    (q.xd.clone(), q.x.clone())
}

/// `ι_A(q)`: `0` when `q ∈ A` (dual equality by probes), `+∞` otherwise.
pub fn indicator(set: &[PairedPoint], q: &PairedPoint, tol: f64) -> Result<ExtReal> {
    if set.is_empty() {
        return Ok(ExtReal::PosInf);
    }
    let index = PairIndex::new(q.space(), set, &[q], tol)?;
    Ok(match index.find(q)? {
        Some(_) => ExtReal::finite(Scalar::zero()),
        None => ExtReal::PosInf,
    })
}

/// A conjugate value together with the universe positions attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugateValue {
    pub value: ExtReal,
    pub argmax: Vec<usize>,
}

/// Evaluates `h◊_p` repeatedly over one universe. Table values are looked
/// up once, at construction.
#[derive(Clone, Debug)]
pub struct Conjugator {
    p: Point,
    universe: Vec<PairedPoint>,
    values: Vec<ExtReal>,
    tol: f64,
}

impl Conjugator {
    pub fn new(h: &FunctionTable, p: &Point, universe: &CandidateUniverse, tol: f64) -> Result<Self> {
        let values = h.values_on(universe, tol)?;
        Self::from_values(p, universe, values, tol)
    }

    /// Uses `values[i]` as `h` at `universe.pairs[i]`.
    pub fn from_values(p: &Point, universe: &CandidateUniverse, values: Vec<ExtReal>, tol: f64) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| *v == ExtReal::NegInf) {
            return Err(Error::Improper(format!(
                "function is -inf at universe pair {}",
                universe.pairs[i]
            )));
        }
        for q in &universe.pairs {
            ensure_same_space(p, &q.x)?;
        }
        Ok(Self {
            p: p.clone(),
            universe: universe.pairs.clone(),
            values,
            tol,
        })
    }

    pub fn eval(&self, xd: &DualVector, x: &Point) -> Result<ExtReal> {
        Ok(self.eval_with_argmax(xd, x)?.value)
    }

    pub fn eval_with_argmax(&self, xd: &DualVector, x: &Point) -> Result<ConjugateValue> {
        ensure_same_space(&self.p, x)?;
        let mut best = ExtReal::NegInf;
        let mut argmax = Vec::new();
        let mut terms = Vec::with_capacity(self.universe.len());
        for (i, (q, h)) in self.universe.iter().zip(&self.values).enumerate() {
            let Some(h) = h.as_finite() else { continue };
            let v = xd.pair_points(&self.p, &q.x)? + q.xd.pair_points(&self.p, x)? - h;
            let v = ExtReal::finite(v);
            if v > best {
                best = v.clone();
            }
            terms.push((i, v));
        }
        if let ExtReal::Finite(b) = &best {
            let b = b.to_f64();
            argmax = terms
                .into_iter()
                .filter(|(_, v)| (v.to_f64() - b).abs() <= self.tol * (1.0 + b.abs()))
                .map(|(i, _)| i)
                .collect();
        }
        Ok(ConjugateValue { value: best, argmax })
    }
}

/// `h◊_p(x◊, x)` relative to `universe`.
pub fn fenchel_conjugate_p(
    h: &FunctionTable,
    p: &Point,
    universe: &CandidateUniverse,
    xd: &DualVector,
    x: &Point,
    tol: f64,
) -> Result<ExtReal> {
    Conjugator::new(h, p, universe, tol)?.eval(xd, x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    #[serde(serialize_with = "crate::report::extended_f64")]
    pub lhs: f64,
    #[serde(serialize_with = "crate::report::extended_f64")]
    pub rhs: f64,
    pub holds: bool,
}

/// `h(x, x◊) + h◊_p(y◊, y) >= <y◊, px→> + <x◊, py→>` for `q1 = (x, x◊)`,
/// `q2 = (y, y◊)`, the conjugate taken over the table's own domain.
pub fn fenchel_young_check(
    h: &FunctionTable,
    p: &Point,
    q1: &PairedPoint,
    q2: &PairedPoint,
    tol: f64,
) -> Result<InequalityCheck> {
    let domain = CandidateUniverse::new(h.domain());
    let conj = Conjugator::new(h, p, &domain, tol)?;
    fenchel_young_with(&conj, h, p, q1, q2, tol)
}

fn lookup(h: &FunctionTable, q: &PairedPoint, tol: f64) -> Result<ExtReal> {
    let u = CandidateUniverse::new(vec![q.clone()]);
    Ok(h.values_on(&u, tol)?.remove(0))
}

pub(crate) fn fenchel_young_with(
    conj: &Conjugator,
    h: &FunctionTable,
    p: &Point,
    q1: &PairedPoint,
    q2: &PairedPoint,
    tol: f64,
) -> Result<InequalityCheck> {
    let h1 = lookup(h, q1, tol)?;
    let c2 = conj.eval(&q2.xd, &q2.x)?;
    let rhs = (q2.xd.pair_points(p, &q1.x)? + q1.xd.pair_points(p, &q2.x)?).to_f64();
    let lhs = h1.checked_add(&c2)?.to_f64();
    Ok(InequalityCheck {
        holds: lhs >= rhs - tol * (1.0 + rhs.abs()),
        lhs,
        rhs,
    })
}

/// Exhaustive Fenchel–Young over all ordered pairs of table entries.
pub fn fenchel_young_exhaustive(h: &FunctionTable, p: &Point, tol: f64) -> Result<Option<Witness>> {
    let domain = CandidateUniverse::new(h.domain());
    let values = h.entries.iter().map(|(_, v)| v.clone()).collect();
    let conj = Conjugator::from_values(p, &domain, values, tol)?;
    let conj_values: Vec<ExtReal> = h
        .entries
        .iter()
        .map(|(q, _)| conj.eval(&q.xd, &q.x))
        .collect::<Result<_>>()?;
    for (i, (q1, h1)) in h.entries.iter().enumerate() {
        for (j, ((q2, _), c2)) in h.entries.iter().zip(&conj_values).enumerate() {
            let rhs = (q2.xd.pair_points(p, &q1.x)? + q1.xd.pair_points(p, &q2.x)?).to_f64();
            let lhs = h1.checked_add(c2)?.to_f64();
            if lhs < rhs - tol * (1.0 + rhs.abs()) {
                return Ok(Some(Witness {
                    context: format!("Fenchel-Young fails for entries {i} and {j}"),
                    indices: vec![i, j],
                    lhs,
                    rhs,
                }));
            }
        }
    }
    Ok(None)
}

/// `1/2 (h + h◊_p ∘ r) >= π_p` on every universe pair; returns the first
/// violation.
pub fn avg_lowerbound_check(
    h: &FunctionTable,
    p: &Point,
    universe: &CandidateUniverse,
    tol: f64,
) -> Result<Option<Witness>> {
    let values = h.values_on(universe, tol)?;
    let conj = Conjugator::from_values(p, universe, values.clone(), tol)?;
    for (i, (q, hv)) in universe.pairs.iter().zip(&values).enumerate() {
        let c = conj.eval(&q.xd, &q.x)?;
        let lhs = hv.checked_add(&c)?.to_f64() / 2.0;
        let rhs = coupling_pi(p, q)?.to_f64();
        if lhs < rhs - tol * (1.0 + rhs.abs()) {
            return Ok(Some(Witness {
                context: format!("average bound fails at universe pair {i}"),
                indices: vec![i],
                lhs,
                rhs,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaReport {
    pub holds: bool,
    pub proper: bool,
    #[serde(serialize_with = "crate::report::extended_f64")]
    pub worst_defect: f64,
    pub convexity_witness: Option<Witness>,
    pub convexity_checked: usize,
    pub convexity_skipped: usize,
    pub fixed_point_witness: Option<Witness>,
    /// Lower semicontinuity cannot be tested on finite tables.
    pub lsc_checked: bool,
    pub universe: String,
}

/// Tests `h ∈ Γ◊_p` relative to `universe`:
/// properness, convexity along `λ`-combinations of table pairs that land on
/// other table pairs, and `h = (h + ι_{h ≤ π_p})◊_p ∘ r` at every universe
/// pair. Combinations with no table entry are skipped and counted.
pub fn gamma_p_membership(
    h: &FunctionTable,
    p: &Point,
    universe: &CandidateUniverse,
    lambda_grid: &[f64],
    tol: f64,
) -> Result<GammaReport> {
    let mut report = GammaReport {
        holds: false,
        proper: true,
        worst_defect: 0.0,
        convexity_witness: None,
        convexity_checked: 0,
        convexity_skipped: 0,
        fixed_point_witness: None,
        lsc_checked: false,
        universe: universe.label(),
    };
    if h.properness_issue().is_some() {
        report.proper = false;
        report.worst_defect = f64::INFINITY;
        return Ok(report);
    }

    convexity_scan(h, lambda_grid, tol, &mut report)?;

    // fixed point relative to U
    let values = h.values_on(universe, tol)?;
    let restricted: Vec<ExtReal> = universe
        .pairs
        .iter()
        .zip(&values)
        .map(|(q, v)| {
            let pi = coupling_pi(p, q)?.to_f64();
            Ok(match v {
                ExtReal::Finite(s) if s.to_f64() <= pi + tol * (1.0 + pi.abs()) => v.clone(),
                _ => ExtReal::PosInf,
            })
        })
        .collect::<Result<_>>()?;
    let conj = Conjugator::from_values(p, universe, restricted, tol)?;
    for (i, (q, hv)) in universe.pairs.iter().zip(&values).enumerate() {
        let c = conj.eval(&q.xd, &q.x)?;
        let defect = hv.defect(&c);
        report.worst_defect = report.worst_defect.max(defect);
        let scale = if hv.is_finite() { 1.0 + hv.to_f64().abs() } else { 1.0 };
        if defect > tol * scale && report.fixed_point_witness.is_none() {
            report.fixed_point_witness = Some(Witness {
                context: format!("h differs from (h + ι{{h <= π_p}})◊_p ∘ r at universe pair {i}"),
                indices: vec![i],
                lhs: hv.to_f64(),
                rhs: c.to_f64(),
            });
        }
    }
    report.holds = report.proper && report.convexity_witness.is_none() && report.fixed_point_witness.is_none();
    Ok(report)
}

fn convexity_scan(h: &FunctionTable, lambda_grid: &[f64], tol: f64, report: &mut GammaReport) -> Result<()> {
    let domain = h.domain();
    let index = PairIndex::new(h.space(), &domain, &[], tol)?;
    let dual_fps: Vec<Vec<f64>> = domain
        .iter()
        .map(|q| index.dual_fingerprint(&q.xd))
        .collect::<Result<_>>()?;
    let lambdas: Vec<f64> = lambda_grid.iter().copied().filter(|l| *l > 0.0 && *l < 1.0).collect();
    let finite: Vec<usize> = (0..domain.len()).filter(|&i| h.entries[i].1.is_finite()).collect();
    for (ai, &a) in finite.iter().enumerate() {
        for &b in &finite[ai + 1..] {
            for &lambda in &lambdas {
                let ls = Scalar::from(lambda);
                let x = geodesic_point(&domain[a].x, &domain[b].x, &ls)?;
                let mut fp = index.point_fingerprint(&x);
                fp.extend(
                    dual_fps[a]
                        .iter()
                        .zip(&dual_fps[b])
                        .map(|(u, v)| (1.0 - lambda) * u + lambda * v),
                );
                let combo = if h.space().kind == crate::geometry::SpaceKind::RTree {
                    let xd = dual_add(
                        &dual_scale(&Scalar::from(1.0 - lambda), &domain[a].xd),
                        &dual_scale(&ls, &domain[b].xd),
                    )?;
                    Some(PairedPoint { x: x.clone(), xd })
                } else {
                    None
                };
                let Some(c) = index.find_fingerprint(&fp, combo.as_ref())? else {
                    report.convexity_skipped += 1;
                    continue;
                };
                report.convexity_checked += 1;
                let lhs = h.entries[c].1.to_f64();
                let rhs = (1.0 - lambda) * h.entries[a].1.to_f64() + lambda * h.entries[b].1.to_f64();
                let defect = lhs - rhs;
                if defect > 0.0 {
                    report.worst_defect = report.worst_defect.max(defect);
                }
                if defect > tol * (1.0 + rhs.abs()) && report.convexity_witness.is_none() {
                    report.convexity_witness = Some(Witness {
                        context: format!("convexity fails between entries {a} and {b} at λ = {lambda}"),
                        indices: vec![a, b, c],
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(())
}

/// `sup { <u|y> + <v|x> - h(y, v) }` over a Euclidean grid of `(y, v, h)`.
pub fn classical_conjugate_oracle(grid: &[(Vec<f64>, Vec<f64>, ExtReal)], u: &[f64], x: &[f64]) -> Result<ExtReal> {
    let dot = |a: &[f64], b: &[f64]| -> Result<f64> {
        if a.len() != b.len() {
            return Err(Error::SpaceMismatch(format!("dims {} and {}", a.len(), b.len())));
        }
        Ok(a.iter().zip(b).map(|(s, t)| s * t).sum())
    };
    let mut best = ExtReal::NegInf;
    for (y, v, h) in grid {
        match h {
            ExtReal::NegInf => return Err(Error::Improper("grid value -inf".into())),
            ExtReal::PosInf => continue,
            ExtReal::Finite(hv) => {
                let val = ExtReal::finite(dot(u, y)? + dot(v, x)? - hv.to_f64());
                if val > best {
                    best = val;
                }
            }
        }
    }
    Ok(best)
}
