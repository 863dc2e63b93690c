//! The p-Fitzpatrick transform of an operator graph,
//!
//! ```text
//! Φ^p_T(x, x◊) = sup { <x◊, py→> - <y◊, xy→> : (y, y◊) ∈ gra T }
//!              = π_p(x, x◊) - inf { <x◊ - y◊, yx→> : (y, y◊) ∈ gra T }
//!              = (ι_{gra T} + π_p)◊_p (x◊, x),
//! ```
//!
//! its level sets against `π_p`, the operator `S_{h,p}` read off the equality
//! set of a function, and the Euclidean oracle `F_T`.

use serde::Serialize;

use crate::conjugate::{coupling_pi, gamma_p_membership, CandidateUniverse, Conjugator, FunctionTable, PairedPoint};
use crate::dual::{dual_add, dual_scale};
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::geometry::{ensure_same_space, geodesic_point, Point};
use crate::index::PairIndex;
use crate::monotone::{
    f_property_check, is_maximal_relative, is_monotone, monotone_polar_indices, monotonicity_gap, OperatorGraph,
};
use crate::report::{PropertyReport, Witness};
use crate::scalar::Scalar;

/// A point `(x, x◊)` at which to evaluate `Φ^p`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitzQuery {
    pub p: Point,
    pub q: PairedPoint,
}

impl FitzQuery {
    pub fn new(p: Point, q: PairedPoint) -> Result<Self> {
        ensure_same_space(&p, &q.x)?;
        Ok(Self { p, q })
    }
}

fn check_spaces(g: &OperatorGraph, query: &FitzQuery) -> Result<()> {
    ensure_same_space(&query.p, &query.q.x)?;
    if g.space != query.p.space() {
        return Err(Error::SpaceMismatch(format!(
            "graph in {} queried in {}",
            g.space,
            query.p.space()
        )));
    }
    Ok(())
}

/// `sup { <x◊, py→> - <y◊, xy→> }`; `-∞` for the empty graph.
pub fn fitzpatrick_sup(g: &OperatorGraph, query: &FitzQuery) -> Result<ExtReal> {
    check_spaces(g, query)?;
    let FitzQuery { p, q } = query;
    let mut best = ExtReal::NegInf;
    for r in &g.pairs {
        let v = q.xd.pair_points(p, &r.x)? - r.xd.pair_points(&q.x, &r.x)?;
        let v = ExtReal::finite(v);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// `inf { <x◊ - y◊, yx→> : (y, y◊) ∈ gra T }`; `+∞` for the empty graph.
pub fn min_monotonicity_gap(g: &OperatorGraph, q: &PairedPoint) -> Result<ExtReal> {
    let mut best = ExtReal::PosInf;
    for r in &g.pairs {
        let v = ExtReal::finite(monotonicity_gap(q, r)?);
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// `π_p(x, x◊) - inf { <x◊ - y◊, yx→> }`.
pub fn fitzpatrick_inf(g: &OperatorGraph, query: &FitzQuery) -> Result<ExtReal> {
    check_spaces(g, query)?;
    let pi = coupling_pi(&query.p, &query.q)?;
    Ok(min_monotonicity_gap(g, &query.q)?.neg().add_scalar(&pi))
}

/// `(ι_{gra T} + π_p)◊_p ∘ r`, the conjugate taken over the graph itself
/// (the indicator removes every other pair).
pub fn fitzpatrick_via_conjugate(g: &OperatorGraph, query: &FitzQuery, tol: f64) -> Result<ExtReal> {
    check_spaces(g, query)?;
    let conj = graph_conjugator(g, &query.p, tol)?;
    conj.eval(&query.q.xd, &query.q.x)
}

fn graph_conjugator(g: &OperatorGraph, p: &Point, tol: f64) -> Result<Conjugator> {
    let universe = CandidateUniverse::new(g.pairs.clone());
    let values = g
        .pairs
        .iter()
        .map(|r| coupling_pi(p, r).map(ExtReal::finite))
        .collect::<Result<Vec<_>>>()?;
    Conjugator::from_values(p, &universe, values, tol)
}

/// `Φ^p_T` tabulated on `domain`.
pub fn fitzpatrick_table(g: &OperatorGraph, p: &Point, domain: &[PairedPoint]) -> Result<FunctionTable> {
    FunctionTable::from_fn(p.clone(), domain, |q| {
        fitzpatrick_sup(
            g,
            &FitzQuery {
                p: p.clone(),
                q: q.clone(),
            },
        )
    })
}

/// Partition of a universe by comparing `Φ^p_T` with `π_p`, with the
/// cross-checks that relate the level sets to the monotone polar and to
/// (relative) maximality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SLevelReport {
    pub below: Vec<usize>,
    pub equal: Vec<usize>,
    pub above: Vec<usize>,
    /// `Φ^p_T - π_p` at each universe pair.
    #[serde(serialize_with = "crate::report::extended_f64_vec")]
    pub excess: Vec<f64>,
    /// `{Φ ≤ π_p} ∩ U` coincides with the monotone polar of the graph in `U`.
    pub polar_agrees: bool,
    pub monotone: bool,
    /// For monotone graphs: every graph pair has `Φ = π_p`.
    pub graph_on_equality: Option<bool>,
    /// `None` when the graph is not contained in `U`.
    pub maximal_relative: Option<bool>,
    /// For maximal-relative graphs: `{Φ = π_p} ∩ U = {Φ ≤ π_p} ∩ U = graph`.
    pub maximal_level_sets: Option<bool>,
    /// When `{Φ = π_p} ∩ U = graph` and `{Φ ≥ π_p} ⊇ U`: whether the graph is
    /// maximal relative to `U`, as those two conditions imply.
    pub conditions_imply_maximal: Option<bool>,
    pub universe: String,
}

impl SLevelReport {
    pub fn consistent(&self) -> bool {
        self.polar_agrees
            && self.graph_on_equality != Some(false)
            && self.maximal_level_sets != Some(false)
            && self.conditions_imply_maximal != Some(false)
    }
}

/// Sorts `Φ - π_p = -inf gap` into `<`, `=`, `>` with an absolute band `tol`.
fn classify(excess: f64, tol: f64) -> std::cmp::Ordering {
    if excess.abs() <= tol {
        std::cmp::Ordering::Equal
    } else if excess < 0.0 {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

pub fn level_set_report(g: &OperatorGraph, p: &Point, universe: &CandidateUniverse, tol: f64) -> Result<SLevelReport> {
    use std::cmp::Ordering::*;
    for q in &universe.pairs {
        ensure_same_space(p, &q.x)?;
    }
    let mut report = SLevelReport {
        below: Vec::new(),
        equal: Vec::new(),
        above: Vec::new(),
        excess: Vec::with_capacity(universe.len()),
        polar_agrees: false,
        monotone: false,
        graph_on_equality: None,
        maximal_relative: None,
        maximal_level_sets: None,
        conditions_imply_maximal: None,
        universe: universe.label(),
    };
    for (i, q) in universe.pairs.iter().enumerate() {
        let excess = min_monotonicity_gap(g, q)?.neg().to_f64();
        report.excess.push(excess);
        match classify(excess, tol) {
            Less => report.below.push(i),
            Equal => report.equal.push(i),
            Greater => report.above.push(i),
        }
    }

    let mut at_most: Vec<usize> = report.below.iter().chain(&report.equal).copied().collect();
    at_most.sort_unstable();
    report.polar_agrees = at_most == monotone_polar_indices(&g.pairs, universe, tol)?;

    report.monotone = is_monotone(g, tol)?.holds;
    if report.monotone {
        let mut on_eq = true;
        for r in &g.pairs {
            let excess = min_monotonicity_gap(g, r)?.neg().to_f64();
            on_eq &= classify(excess, tol) == Equal;
        }
        report.graph_on_equality = Some(on_eq);
    }

    // positions of graph pairs inside U
    let context: Vec<&PairedPoint> = g.pairs.iter().collect();
    let index = PairIndex::new(g.space, &universe.pairs, &context, tol)?;
    let mut graph_in_u = Vec::with_capacity(g.len());
    for r in &g.pairs {
        match index.find(r)? {
            Some(i) => graph_in_u.push(i),
            None => return Ok(report),
        }
    }
    graph_in_u.sort_unstable();
    graph_in_u.dedup();

    let maximal = is_maximal_relative(g, universe, tol)?.holds;
    report.maximal_relative = Some(maximal);
    if maximal {
        report.maximal_level_sets = Some(report.equal == graph_in_u && at_most == graph_in_u);
    }
    if report.equal == graph_in_u && report.below.is_empty() {
        report.conditions_imply_maximal = Some(maximal);
    }
    Ok(report)
}

/// `S_{h,p}`: the table pairs with `h = π_p` (within `tol`, relative).
pub fn s_map(h: &FunctionTable, p: &Point, tol: f64) -> Result<OperatorGraph> {
    let mut pairs = Vec::new();
    for (q, v) in &h.entries {
        let pi = coupling_pi(p, q)?;
        if let Some(hv) = v.as_finite() {
            let diff = (hv - &pi).to_f64().abs();
            if diff <= tol * (1.0 + pi.to_f64().abs()) {
                pairs.push(q.clone());
            }
        }
    }
    OperatorGraph::new(p.space(), pairs)
}

/// For `h ∈ Γ◊_p` (relative to `universe`): `Φ^p_{S_{h,p}} = h` on the
/// table domain. A table failing the membership test is a precondition
/// error.
pub fn roundtrip_check(
    h: &FunctionTable,
    p: &Point,
    universe: &CandidateUniverse,
    lambda_grid: &[f64],
    tol: f64,
) -> Result<PropertyReport> {
    let gamma = gamma_p_membership(h, p, universe, lambda_grid, tol)?;
    if !gamma.holds {
        return Err(Error::Precondition(format!(
            "table is not in Γ◊_p relative to U (worst defect {})",
            crate::scalar::format_float(gamma.worst_defect)
        )));
    }
    let s = s_map(h, p, tol)?;
    for (i, (q, v)) in h.entries.iter().enumerate() {
        let phi = fitzpatrick_sup(
            &s,
            &FitzQuery {
                p: p.clone(),
                q: q.clone(),
            },
        )?;
        let scale = if v.is_finite() { 1.0 + v.to_f64().abs() } else { 1.0 };
        if phi.defect(v) > tol * scale {
            return Ok(PropertyReport::fail(
                i + 1,
                Witness {
                    context: format!("Φ of the recovered graph differs from h at entry {i}"),
                    indices: vec![i],
                    lhs: phi.to_f64(),
                    rhs: v.to_f64(),
                },
            ));
        }
    }
    Ok(PropertyReport::pass(h.entries.len()))
}

/// `F_T(x, u) = <x|u> - inf { <x - y | u - w> : (y, w) ∈ gra T }`.
pub fn classical_fitzpatrick_oracle(g: &[(Vec<f64>, Vec<f64>)], x: &[f64], u: &[f64]) -> Result<ExtReal> {
    let dot = |a: &[f64], b: &[f64]| -> Result<f64> {
        if a.len() != b.len() {
            return Err(Error::SpaceMismatch(format!("dims {} and {}", a.len(), b.len())));
        }
        Ok(a.iter().zip(b).map(|(s, t)| s * t).sum())
    };
    let mut inf = f64::INFINITY;
    for (y, w) in g {
        let dx: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let du: Vec<f64> = u.iter().zip(w).map(|(a, b)| a - b).collect();
        inf = inf.min(dot(&dx, &du)?);
    }
    if inf == f64::INFINITY {
        return Ok(ExtReal::NegInf);
    }
    Ok(ExtReal::finite(dot(x, u)? - inf))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitzConvexityReport {
    pub report: PropertyReport,
    /// Input pairs skipped because `{a, b} × Range(T)` fails `F_l`.
    pub skipped: Vec<usize>,
}

/// `Φ(c(λ), c◊(λ)) <= (1-λ) Φ(a, a◊) + λ Φ(b, b◊)` for each pair whose
/// `{a, b} × Range(T)` has the `F_l` property on the grid.
pub fn convexity_check_fitz(
    g: &OperatorGraph,
    p: &Point,
    pairs: &[(PairedPoint, PairedPoint)],
    lambda_grid: &[f64],
    tol: f64,
) -> Result<FitzConvexityReport> {
    let mut skipped = Vec::new();
    let mut checked = 0;
    let phi = |q: &PairedPoint| {
        fitzpatrick_sup(
            g,
            &FitzQuery {
                p: p.clone(),
                q: q.clone(),
            },
        )
    };
    for (k, (a, b)) in pairs.iter().enumerate() {
        let mut m = Vec::with_capacity(2 * g.len());
        for r in &g.pairs {
            m.push(PairedPoint::new(a.x.clone(), r.xd.clone())?);
            m.push(PairedPoint::new(b.x.clone(), r.xd.clone())?);
        }
        if !m.is_empty() && !f_property_check(&m, p, lambda_grid, tol)?.f_l.holds {
            skipped.push(k);
            continue;
        }
        let (fa, fb) = (phi(a)?, phi(b)?);
        for &lambda in lambda_grid {
            checked += 1;
            let l = Scalar::from(lambda);
            let c = PairedPoint::new(
                geodesic_point(&a.x, &b.x, &l)?,
                dual_add(&dual_scale(&(Scalar::one() - &l), &a.xd), &dual_scale(&l, &b.xd))?,
            )?;
            let lhs = phi(&c)?;
            let rhs = fa
                .scale_nonneg(&(Scalar::one() - &l))
                .checked_add(&fb.scale_nonneg(&l))?;
            let (lf, rf) = (lhs.to_f64(), rhs.to_f64());
            let violated = match (lhs.is_finite(), rhs.is_finite()) {
                (true, true) => lf > rf + tol * (1.0 + rf.abs()),
                _ => lhs > rhs,
            };
            if violated {
                return Ok(FitzConvexityReport {
                    report: PropertyReport::fail(
                        checked,
                        Witness {
                            context: format!("Φ is not convex along pair {k} at λ = {lambda}"),
                            indices: vec![k],
                            lhs: lf,
                            rhs: rf,
                        },
                    ),
                    skipped,
                });
            }
        }
    }
    Ok(FitzConvexityReport {
        report: PropertyReport::pass(checked),
        skipped,
    })
}
