//! Geodesic-space primitives shared by every other module: space handles,
//! points, bound vectors, distances, geodesic combinations and the
//! quasilinearization pairing
//!
//! ```text
//! <xy, uv> = 1/2 (d(x,v)^2 + d(y,u)^2 - d(x,u)^2 - d(y,v)^2)
//! ```
//!
//! together with the CN-inequality and Cauchy–Schwarz checks that
//! characterise CAT(0) spaces.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spaces::{euclidean, hyperbolic, rtree, RTreePoint};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Euclidean,
    RTree,
    Hyperbolic,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::RTree => "rtree",
            SpaceKind::Hyperbolic => "hyperbolic",
        })
    }
}

/// Identifies one concrete Hadamard space. `dim` is ignored for the ℝ-tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceHandle {
    pub kind: SpaceKind,
    pub dim: usize,
}

impl SpaceHandle {
    pub fn new(kind: SpaceKind, dim: usize) -> Result<Self> {
        if kind != SpaceKind::RTree && dim == 0 {
            return Err(Error::OutOfRange(format!("{kind} space needs dim >= 1")));
        }
        let dim = if kind == SpaceKind::RTree { 1 } else { dim };
        Ok(Self { kind, dim })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(SpaceKind::Euclidean, dim).expect("euclidean dim >= 1")
    }

    pub fn rtree() -> Self {
        Self {
            kind: SpaceKind::RTree,
            dim: 1,
        }
    }

    pub fn hyperbolic(dim: usize) -> Self {
        Self::new(SpaceKind::Hyperbolic, dim).expect("hyperbolic dim >= 1")
    }

    /// Absolute comparison tolerance for closed-form quantities in this space.
    pub fn default_tolerance(&self) -> f64 {
        match self.kind {
            SpaceKind::Hyperbolic => tolerance::HYPERBOLIC,
            _ => tolerance::CLOSED_FORM,
        }
    }

    pub fn validate(&self, p: &Point) -> Result<()> {
        match (self.kind, p) {
            (SpaceKind::Euclidean, Point::Euclidean(v)) if v.len() == self.dim => {
                if v.iter().all(Scalar::is_finite) {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint {
                        reason: "non-finite coordinate".into(),
                        defect: f64::INFINITY,
                    })
                }
            }
            (SpaceKind::RTree, Point::RTree(_)) => Ok(()),
            (SpaceKind::Hyperbolic, Point::Hyperbolic(v)) => hyperbolic::validate(v, self.dim),
            _ => Err(Error::SpaceMismatch(format!("point {p} does not belong to {self}"))),
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<Scalar> {
        self.validate(x)?;
        self.validate(y)?;
        distance(x, y)
    }

    pub fn geodesic_point(&self, x: &Point, y: &Point, t: &Scalar) -> Result<Point> {
        self.validate(x)?;
        self.validate(y)?;
        geodesic_point(x, y, t)
    }

    /// Evaluates both sides of the CN-inequality
    /// `d(z, (1-t)x ⊕ ty)^2 <= (1-t) d(z,x)^2 + t d(z,y)^2 - t(1-t) d(x,y)^2`.
    pub fn check_cn_inequality(&self, x: &Point, y: &Point, z: &Point, t: &Scalar, tol: f64) -> Result<CnCheck> {
        self.validate(z)?;
        let m = self.geodesic_point(x, y, t)?;
        let one_minus = Scalar::one() - t;
        let lhs = distance_sq(z, &m)?;
        let rhs = &one_minus * distance_sq(z, x)? + t * distance_sq(z, y)? - t * &one_minus * distance_sq(x, y)?;
        let gap = (&lhs - &rhs).to_f64();
        Ok(CnCheck {
            holds: gap <= tol,
            is_equality: gap.abs() <= tol,
            lhs,
            rhs,
        })
    }
}

impl fmt::Display for SpaceHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::RTree => f.write_str("rtree"),
            kind => write!(f, "{kind}({})", self.dim),
        }
    }
}

/// A point tagged with the kind of space it lives in.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Euclidean(Vec<Scalar>),
    RTree(RTreePoint),
    Hyperbolic(Vec<f64>),
}

impl Point {
    /// Euclidean point from float coordinates.
    pub fn euclidean(coords: &[f64]) -> Self {
        Point::Euclidean(coords.iter().map(|&c| Scalar::from(c)).collect())
    }

    /// ℝ-tree point `[(branch, t)]`, panicking on an invalid payload.
    pub fn rtree(branch: u64, t: Scalar) -> Self {
        Point::RTree(RTreePoint::new(branch, t).expect("valid rtree payload"))
    }

    pub fn space(&self) -> SpaceHandle {
        match self {
            Point::Euclidean(v) => SpaceHandle {
                kind: SpaceKind::Euclidean,
                dim: v.len(),
            },
            Point::RTree(_) => SpaceHandle::rtree(),
            Point::Hyperbolic(v) => SpaceHandle {
                kind: SpaceKind::Hyperbolic,
                dim: v.len().saturating_sub(1),
            },
        }
    }

    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        match (self, other) {
            (Point::Euclidean(a), Point::Euclidean(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(u, v)| u.approx_eq(v, tol))
            }
            (Point::RTree(a), Point::RTree(b)) => {
                let (ta, tb) = (a.t().to_f64(), b.t().to_f64());
                (ta.abs() <= tol && tb.abs() <= tol) || (a.branch() == b.branch() && (ta - tb).abs() <= tol)
            }
            (Point::Hyperbolic(a), Point::Hyperbolic(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(u, v)| (u - v).abs() <= tol)
            }
            _ => false,
        }
    }

    /// Appends a float signature of the point used for fast approximate lookup.
    pub(crate) fn fingerprint(&self, out: &mut Vec<f64>) {
        match self {
            Point::Euclidean(v) => out.extend(v.iter().map(Scalar::to_f64)),
            Point::RTree(p) => {
                out.push(if p.is_root() { 0.0 } else { p.branch() as f64 });
                out.push(p.t().to_f64());
            }
            Point::Hyperbolic(v) => out.extend_from_slice(v),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Euclidean(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
            Point::RTree(p) => write!(f, "{p}"),
            Point::Hyperbolic(v) => {
                let parts: Vec<String> = v.iter().map(|c| crate::scalar::format_float(*c)).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

pub(crate) fn ensure_same_space(x: &Point, y: &Point) -> Result<()> {
    if x.space() == y.space() {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(format!("{} vs {}", x.space(), y.space())))
    }
}

pub fn distance_sq(x: &Point, y: &Point) -> Result<Scalar> {
    ensure_same_space(x, y)?;
    Ok(match (x, y) {
        (Point::Euclidean(a), Point::Euclidean(b)) => euclidean::distance_sq(a, b),
        (Point::RTree(a), Point::RTree(b)) => rtree::distance_sq(a, b),
        (Point::Hyperbolic(a), Point::Hyperbolic(b)) => Scalar::from(hyperbolic::distance(a, b)?.powi(2)),
        _ => unreachable!("space kinds checked above"),
    })
}

pub fn distance(x: &Point, y: &Point) -> Result<Scalar> {
    ensure_same_space(x, y)?;
    Ok(match (x, y) {
        (Point::Euclidean(a), Point::Euclidean(b)) => euclidean::distance_sq(a, b).sqrt(),
        (Point::RTree(a), Point::RTree(b)) => rtree::distance(a, b),
        (Point::Hyperbolic(a), Point::Hyperbolic(b)) => Scalar::from(hyperbolic::distance(a, b)?),
        _ => unreachable!("space kinds checked above"),
    })
}

/// The convex combination `(1 - t) x ⊕ t y`.
pub fn geodesic_point(x: &Point, y: &Point, t: &Scalar) -> Result<Point> {
    ensure_same_space(x, y)?;
    if !t.is_finite() || *t < Scalar::zero() || *t > Scalar::one() {
        return Err(Error::OutOfRange(format!("geodesic parameter {t} outside [0, 1]")));
    }
    if t.is_zero() {
        return Ok(x.clone());
    }
    if *t == Scalar::one() {
        return Ok(y.clone());
    }
    Ok(match (x, y) {
        (Point::Euclidean(a), Point::Euclidean(b)) => Point::Euclidean(euclidean::geodesic(a, b, t)),
        (Point::RTree(a), Point::RTree(b)) => Point::RTree(rtree::geodesic(a, b, t)),
        (Point::Hyperbolic(a), Point::Hyperbolic(b)) => {
            Point::Hyperbolic(hyperbolic::hyperbolic_geodesic(a, b, t.to_f64())?)
        }
        _ => unreachable!("space kinds checked above"),
    })
}

/// The ordered pair `xy→`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundVector {
    pub tail: Point,
    pub head: Point,
}

impl BoundVector {
    pub fn new(tail: Point, head: Point) -> Result<Self> {
        ensure_same_space(&tail, &head)?;
        Ok(Self { tail, head })
    }

    pub fn zero(at: Point) -> Self {
        Self {
            tail: at.clone(),
            head: at,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.tail == self.head
    }

    /// `yx→`, identified with `-xy→`.
    pub fn reversed(&self) -> Self {
        Self {
            tail: self.head.clone(),
            head: self.tail.clone(),
        }
    }

    pub fn space(&self) -> SpaceHandle {
        self.tail.space()
    }

    pub fn length(&self) -> Result<Scalar> {
        distance(&self.tail, &self.head)
    }
}

impl fmt::Display for BoundVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}", self.tail, self.head)
    }
}

/// `<xy→, uv→> = 1/2 (d(x,v)^2 + d(y,u)^2 - d(x,u)^2 - d(y,v)^2)`.
pub fn quasilinearization(xy: &BoundVector, uv: &BoundVector) -> Result<Scalar> {
    ensure_same_space(&xy.tail, &uv.tail)?;
    if xy.is_zero() || uv.is_zero() {
        return Ok(Scalar::zero());
    }
    let (x, y, u, v) = (&xy.tail, &xy.head, &uv.tail, &uv.head);
    let sum = distance_sq(x, v)? + distance_sq(y, u)? - distance_sq(x, u)? - distance_sq(y, v)?;
    Ok(sum * Scalar::ratio(1, 2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CnCheck {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub holds: bool,
    pub is_equality: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CauchySchwarzCheck {
    pub pairing: Scalar,
    pub bound: Scalar,
    pub holds: bool,
}

/// `|<xy→, uv→>| <= d(x,y) d(u,v)`.
pub fn check_cauchy_schwarz(xy: &BoundVector, uv: &BoundVector, tol: f64) -> Result<CauchySchwarzCheck> {
    let pairing = quasilinearization(xy, uv)?;
    let bound = xy.length()? * uv.length()?;
    let holds = (pairing.abs() - &bound).to_f64() <= tol;
    Ok(CauchySchwarzCheck { pairing, bound, holds })
}
