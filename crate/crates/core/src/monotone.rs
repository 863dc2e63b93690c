//! Monotone relatedness `<x◊ - y◊, yx→> >= 0`, monotone polars, monotone
//! and (relative) maximal monotone graphs, and the convexity-type
//! properties of the coupling along geodesics that characterise flat spaces.

use serde::Serialize;

use crate::conjugate::{CandidateUniverse, PairedPoint};
use crate::error::{Error, Result};
use crate::geometry::{geodesic_point, Point, SpaceHandle};
use crate::index::PairIndex;
use crate::report::{PropertyReport, Witness};
use crate::scalar::Scalar;

/// The graph of an operator `T: X ⇉ X◊`, as a finite list of pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorGraph {
    pub space: SpaceHandle,
    pub pairs: Vec<PairedPoint>,
}

impl OperatorGraph {
    pub fn new(space: SpaceHandle, pairs: Vec<PairedPoint>) -> Result<Self> {
        for q in &pairs {
            if q.space() != space || q.xd.space() != space {
                return Err(Error::SpaceMismatch(format!("graph pair {q} is not in {space}")));
            }
        }
        Ok(Self { space, pairs })
    }

    pub fn empty(space: SpaceHandle) -> Self {
        Self {
            space,
            pairs: Vec::new(),
        }
    }

    pub fn dom(&self) -> Vec<&Point> {
        self.pairs.iter().map(|q| &q.x).collect()
    }

    pub fn range(&self) -> Vec<&crate::dual::DualVector> {
        self.pairs.iter().map(|q| &q.xd).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// `<x◊ - y◊, yx→> = <x◊, yx→> - <y◊, yx→>` for `q1 = (x, x◊)`, `q2 = (y, y◊)`.
pub fn monotonicity_gap(q1: &PairedPoint, q2: &PairedPoint) -> Result<Scalar> {
    Ok(q1.xd.pair_points(&q2.x, &q1.x)? - q2.xd.pair_points(&q2.x, &q1.x)?)
}

pub fn monotonically_related(q1: &PairedPoint, q2: &PairedPoint, tol: f64) -> Result<bool> {
    Ok(monotonicity_gap(q1, q2)?.to_f64() >= -tol)
}

pub fn is_monotone(g: &OperatorGraph, tol: f64) -> Result<PropertyReport> {
    let mut checked = 0;
    for (i, a) in g.pairs.iter().enumerate() {
        for (j, b) in g.pairs.iter().enumerate().skip(i + 1) {
            checked += 1;
            let gap = monotonicity_gap(a, b)?.to_f64();
            if gap < -tol {
                return Ok(PropertyReport::fail(
                    checked,
                    Witness {
                        context: format!("graph pairs {i} and {j} are not monotonically related"),
                        indices: vec![i, j],
                        lhs: gap,
                        rhs: 0.0,
                    },
                ));
            }
        }
    }
    Ok(PropertyReport::pass(checked))
}

/// Positions in `universe` of pairs related to every member of `m`.
pub fn monotone_polar_indices(m: &[PairedPoint], universe: &CandidateUniverse, tol: f64) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    'outer: for (i, q) in universe.pairs.iter().enumerate() {
        for r in m {
            if !monotonically_related(q, r, tol)? {
                continue 'outer;
            }
        }
        out.push(i);
    }
    Ok(out)
}

/// `M^μ ∩ U`. An empty `M` yields all of `U`.
pub fn monotone_polar(m: &[PairedPoint], universe: &CandidateUniverse, tol: f64) -> Result<Vec<PairedPoint>> {
    Ok(monotone_polar_indices(m, universe, tol)?
        .into_iter()
        .map(|i| universe.pairs[i].clone())
        .collect())
}

/// Monotone, and every universe pair related to the whole graph is already
/// in it. Maximality is only decided relative to `universe`.
pub fn is_maximal_relative(g: &OperatorGraph, universe: &CandidateUniverse, tol: f64) -> Result<PropertyReport> {
    let context: Vec<&PairedPoint> = g.pairs.iter().collect();
    let u_index = PairIndex::new(g.space, &universe.pairs, &context, tol)?;
    for q in &g.pairs {
        if u_index.find(q)?.is_none() {
            return Err(Error::NotInUniverse(format!(
                "graph pair {q} is missing from the universe"
            )));
        }
    }
    let mono = is_monotone(g, tol)?;
    if !mono.holds {
        return Ok(mono);
    }
    let polar = monotone_polar_indices(&g.pairs, universe, tol)?;
    let u_context: Vec<&PairedPoint> = universe.pairs.iter().collect();
    let g_index = PairIndex::new(g.space, &g.pairs, &u_context, tol)?;
    for &i in &polar {
        let q = &universe.pairs[i];
        if g_index.find(q)?.is_none() {
            let min_gap = g
                .pairs
                .iter()
                .map(|r| monotonicity_gap(q, r).map(|v| v.to_f64()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            return Ok(PropertyReport::fail(
                mono.checked + polar.len(),
                Witness {
                    context: format!("universe pair {i} is monotonically related to the graph but not in it"),
                    indices: vec![i],
                    lhs: min_gap,
                    rhs: 0.0,
                },
            ));
        }
    }
    Ok(PropertyReport::pass(mono.checked + polar.len()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FPropertyReport {
    pub f_l: PropertyReport,
    pub f_g: PropertyReport,
}

impl FPropertyReport {
    pub fn holds(&self) -> bool {
        self.f_l.holds && self.f_g.holds
    }
}

/// Both sides of the F-property inequalities for one `(x◊, x, y, λ)`:
/// `<x◊, p((1-λ)x ⊕ λy)→>` and `(1-λ)<x◊, px→> + λ<x◊, py→>`.
pub fn f_property_sides(
    xd: &crate::dual::DualVector,
    p: &Point,
    x: &Point,
    y: &Point,
    lambda: f64,
) -> Result<(f64, f64)> {
    let l = Scalar::from(lambda);
    let c = geodesic_point(x, y, &l)?;
    let lhs = xd.pair_points(p, &c)?;
    let rhs = (Scalar::one() - &l) * xd.pair_points(p, x)? + &l * xd.pair_points(p, y)?;
    Ok((lhs.to_f64(), rhs.to_f64()))
}

/// Checks the `F_l` (`lhs <= rhs`) and `F_g` (`lhs >= rhs`) inequalities for
/// every `x◊ ∈ Range(M)`, `x, y ∈ Dom(M)` and `λ` in the grid.
pub fn f_property_check(m: &[PairedPoint], p: &Point, lambda_grid: &[f64], tol: f64) -> Result<FPropertyReport> {
    if let Some(l) = lambda_grid.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::OutOfRange(format!("λ = {l} outside [0, 1]")));
    }
    let mut f_l = None;
    let mut f_g = None;
    let mut checked = 0;
    for (k, dq) in m.iter().enumerate() {
        for (i, a) in m.iter().enumerate() {
            for (j, b) in m.iter().enumerate() {
                for &lambda in lambda_grid {
                    checked += 1;
                    let (lhs, rhs) = f_property_sides(&dq.xd, p, &a.x, &b.x, lambda)?;
                    let band = tol * (1.0 + rhs.abs());
                    let witness = |kind: &str| Witness {
                        context: format!("{kind} fails for x◊ of pair {k}, x of pair {i}, y of pair {j}, λ = {lambda}"),
                        indices: vec![k, i, j],
                        lhs,
                        rhs,
                    };
                    if lhs > rhs + band && f_l.is_none() {
                        f_l = Some(witness("F_l"));
                    }
                    if lhs < rhs - band && f_g.is_none() {
                        f_g = Some(witness("F_g"));
                    }
                }
            }
        }
    }
    let wrap = |w: Option<Witness>| match w {
        Some(w) => PropertyReport::fail(checked, w),
        None => PropertyReport::pass(checked),
    };
    Ok(FPropertyReport {
        f_l: wrap(f_l),
        f_g: wrap(f_g),
    })
}

/// Equality in the CN-inequality at every sampled `(x, y, z, t)`.
pub fn flatness_check(
    space: &SpaceHandle,
    triples: &[(Point, Point, Point)],
    t_grid: &[f64],
    tol: f64,
) -> Result<PropertyReport> {
    let mut checked = 0;
    for (i, (x, y, z)) in triples.iter().enumerate() {
        for &t in t_grid {
            checked += 1;
            let c = space.check_cn_inequality(x, y, z, &Scalar::from(t), tol)?;
            if !c.is_equality {
                return Ok(PropertyReport::fail(
                    checked,
                    Witness {
                        context: format!("CN-inequality is strict for triple {i} at t = {t}"),
                        indices: vec![i],
                        lhs: c.lhs.to_f64(),
                        rhs: c.rhs.to_f64(),
                    },
                ));
            }
        }
    }
    Ok(PropertyReport::pass(checked))
}
