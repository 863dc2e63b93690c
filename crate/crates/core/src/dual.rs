//! The linear dual X◊: formal sums `Σ αᵢ [aᵢbᵢ→]` acting on bound vectors by
//!
//! ```text
//! <Σ αᵢ [aᵢbᵢ→], xy→> = Σ αᵢ <aᵢbᵢ→, xy→>
//! ```
//!
//! Formal sums are never reduced; two duals are compared through their
//! action on a [`ProbeSet`].

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{distance, ensure_same_space, quasilinearization, BoundVector, Point, SpaceHandle, SpaceKind};
use crate::sampling;
use crate::scalar::Scalar;
use crate::spaces::{euclidean, RTreePoint};
use crate::tolerance::PROBE_SEED;

#[derive(Clone, Debug, PartialEq)]
pub struct DualTerm {
    pub coeff: Scalar,
    pub bv: BoundVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualVector {
    space: SpaceHandle,
    terms: Vec<DualTerm>,
}

impl DualVector {
    pub fn new(space: SpaceHandle, terms: Vec<DualTerm>) -> Result<Self> {
        for term in &terms {
            if term.bv.space() != space {
                return Err(Error::SpaceMismatch(format!("dual term {} is not in {space}", term.bv)));
            }
        }
        Ok(Self { space, terms })
    }

    pub fn zero(space: SpaceHandle) -> Self {
        Self {
            space,
            terms: Vec::new(),
        }
    }

    /// `[coeff · ab→]`.
    pub fn single(coeff: impl Into<Scalar>, a: Point, b: Point) -> Result<Self> {
        let space = a.space();
        let bv = BoundVector::new(a, b)?;
        Ok(Self {
            space,
            terms: vec![DualTerm {
                coeff: coeff.into(),
                bv,
            }],
        })
    }

    /// `[ab→]`.
    pub fn bound(a: Point, b: Point) -> Result<Self> {
        Self::single(Scalar::one(), a, b)
    }

    pub fn space(&self) -> SpaceHandle {
        self.space
    }

    pub fn terms(&self) -> &[DualTerm] {
        &self.terms
    }

    /// True when every term is trivially zero (no terms, zero coefficients or
    /// zero bound vectors). Duals with equal action may still fail this test.
    pub fn is_formally_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero() || t.bv.is_zero())
    }

    /// Endpoints of all terms, in order.
    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.terms.iter().flat_map(|t| [&t.bv.tail, &t.bv.head])
    }

    pub fn pair(&self, xy: &BoundVector) -> Result<Scalar> {
        if xy.space() != self.space {
            return Err(Error::SpaceMismatch(format!(
                "dual in {} paired with bound vector in {}",
                self.space,
                xy.space()
            )));
        }
        if xy.is_zero() {
            return Ok(Scalar::zero());
        }
        let mut total = Scalar::zero();
        for term in &self.terms {
            if term.coeff.is_zero() {
                continue;
            }
            total = total + &term.coeff * quasilinearization(&term.bv, xy)?;
        }
        Ok(total)
    }

    /// Pairing with the bound vector `xy→` built from two points.
    pub fn pair_points(&self, x: &Point, y: &Point) -> Result<Scalar> {
        ensure_same_space(x, y)?;
        self.pair(&BoundVector {
            tail: x.clone(),
            head: y.clone(),
        })
    }

    pub fn probe_values(&self, probes: &ProbeSet) -> Result<Vec<f64>> {
        probes
            .probes
            .iter()
            .map(|bv| self.pair(bv).map(|v| v.to_f64()))
            .collect()
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·[{}]", term.coeff, term.bv)?;
        }
        Ok(())
    }
}

pub fn dual_add(xd: &DualVector, yd: &DualVector) -> Result<DualVector> {
    if xd.space != yd.space {
        return Err(Error::SpaceMismatch(format!("{} vs {}", xd.space, yd.space)));
    }
    let mut terms = xd.terms.clone();
    terms.extend(yd.terms.iter().cloned());
    Ok(DualVector { space: xd.space, terms })
}

pub fn dual_scale(alpha: &Scalar, xd: &DualVector) -> DualVector {
    DualVector {
        space: xd.space,
        terms: xd
            .terms
            .iter()
            .map(|t| DualTerm {
                coeff: alpha * &t.coeff,
                bv: t.bv.clone(),
            })
            .collect(),
    }
}

/// `xd - yd`.
pub fn dual_sub(xd: &DualVector, yd: &DualVector) -> Result<DualVector> {
    dual_add(xd, &dual_scale(&Scalar::from(-1), yd))
}

/// `<xd, ab→> = <xd, aw→> + <xd, wb→>` within `tol`.
pub fn chain_split_check(xd: &DualVector, a: &Point, b: &Point, w: &Point, tol: f64) -> Result<bool> {
    let whole = xd.pair_points(a, b)?;
    let split = xd.pair_points(a, w)? + xd.pair_points(w, b)?;
    Ok(whole.approx_eq(&split, tol))
}

/// Bound vectors against which dual vectors are compared.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSet {
    probes: Vec<BoundVector>,
}

/// Number of seeded random probes added in hyperbolic space.
const RANDOM_PROBES: usize = 24;

impl ProbeSet {
    pub fn new(probes: Vec<BoundVector>) -> Result<Self> {
        if probes.is_empty() {
            return Err(Error::EmptyProbes);
        }
        Ok(Self { probes })
    }

    pub fn probes(&self) -> &[BoundVector] {
        &self.probes
    }

    /// Default probes for comparing duals whose terms (and any other points of
    /// interest) are listed in `context`.
    ///
    /// The action of a dual is `G(v) - G(u)` for `G(z) = Σ αᵢ/2 (d(aᵢ,z)² -
    /// d(bᵢ,z)²)`. In ℝⁿ `G` is affine, so the basis vectors `0eᵢ→` decide
    /// equality exactly. On the ℝ-tree `G` is affine along every branch, with
    /// one common slope on branches no term touches, so the probes `root→[(n,1)]`
    /// for every branch in `context` plus one unused branch are exact as well.
    /// Hyperbolic space has no such finite set; probes there are bound vectors
    /// between context points plus a seeded random sample.
    pub fn default_for(space: &SpaceHandle, context: &[Point]) -> Self {
        let probes = match space.kind {
            SpaceKind::Euclidean => (0..space.dim)
                .map(|i| {
                    let mut e = vec![Scalar::zero(); space.dim];
                    e[i] = Scalar::one();
                    BoundVector {
                        tail: Point::Euclidean(vec![Scalar::zero(); space.dim]),
                        head: Point::Euclidean(e),
                    }
                })
                .collect(),
            SpaceKind::RTree => {
                let mut branches: BTreeSet<u64> = context
                    .iter()
                    .filter_map(|p| match p {
                        Point::RTree(q) if !q.is_root() => Some(q.branch()),
                        _ => None,
                    })
                    .collect();
                let fresh = branches.iter().next_back().map_or(1, |b| b + 1);
                branches.insert(fresh);
                branches
                    .into_iter()
                    .map(|n| BoundVector {
                        tail: Point::RTree(RTreePoint::root()),
                        head: Point::rtree(n, Scalar::one()),
                    })
                    .collect()
            }
            SpaceKind::Hyperbolic => {
                let mut probes = Vec::new();
                let base = Point::Hyperbolic(crate::spaces::hyperbolic::lift(&vec![0.0; space.dim]));
                let mut anchors: Vec<Point> = vec![base];
                for p in context.iter().take(12) {
                    if !anchors.contains(p) {
                        anchors.push(p.clone());
                    }
                }
                for (i, a) in anchors.iter().enumerate() {
                    for b in &anchors[i + 1..] {
                        probes.push(BoundVector {
                            tail: a.clone(),
                            head: b.clone(),
                        });
                    }
                }
                let mut rng = sampling::rng(PROBE_SEED);
                for _ in 0..RANDOM_PROBES {
                    let tail = sampling::random_point(space, &mut rng);
                    let head = sampling::random_point(space, &mut rng);
                    probes.push(BoundVector { tail, head });
                }
                probes
            }
        };
        Self { probes }
    }

    /// Default probes for comparing the given duals.
    pub fn for_duals<'a>(space: &SpaceHandle, duals: impl IntoIterator<Item = &'a DualVector>) -> Self {
        let context: Vec<Point> = duals.into_iter().flat_map(|d| d.points().cloned()).collect();
        Self::default_for(space, &context)
    }
}

/// `|<xd, bv> - <yd, bv>| <= tol` for every probe.
pub fn dual_equal_on(xd: &DualVector, yd: &DualVector, probes: &ProbeSet, tol: f64) -> Result<bool> {
    if probes.probes.is_empty() {
        return Err(Error::EmptyProbes);
    }
    for bv in &probes.probes {
        if !xd.pair(bv)?.approx_eq(&yd.pair(bv)?, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Hilbert-space representative `Σ αᵢ (bᵢ - aᵢ)` of a Euclidean dual.
pub fn canonical_hilbert(xd: &DualVector) -> Result<Vec<Scalar>> {
    if xd.space.kind != SpaceKind::Euclidean {
        return Err(Error::NotEuclidean(format!("canonical form requested in {}", xd.space)));
    }
    let mut u = vec![Scalar::zero(); xd.space.dim];
    for term in &xd.terms {
        if let (Point::Euclidean(a), Point::Euclidean(b)) = (&term.bv.tail, &term.bv.head) {
            for (ui, d) in u.iter_mut().zip(euclidean::sub(b, a)) {
                *ui = &*ui + &(&term.coeff * &d);
            }
        }
    }
    Ok(u)
}

/// `j_a(u) = [(‖u‖/ε) · a(a + εu/‖u‖)→]`, and the zero dual for `u = 0`.
pub fn j_map(a: &[Scalar], eps: &Scalar, u: &[Scalar]) -> Result<DualVector> {
    if eps.to_f64().partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::OutOfRange(format!("j_map needs eps > 0, got {eps}")));
    }
    if a.len() != u.len() {
        return Err(Error::SpaceMismatch(format!(
            "base point of dim {} with vector of dim {}",
            a.len(),
            u.len()
        )));
    }
    let space = SpaceHandle::new(SpaceKind::Euclidean, a.len())?;
    let norm = euclidean::norm(u);
    if norm.is_zero() {
        return Ok(DualVector::zero(space));
    }
    let step = eps / &norm;
    let head: Vec<Scalar> = a.iter().zip(u).map(|(ai, ui)| ai + &(&step * ui)).collect();
    DualVector::single(&norm / eps, Point::Euclidean(a.to_vec()), Point::Euclidean(head))
}

/// A supremum taken over finitely many candidates: a lower bound of the
/// true value.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    pub candidates: usize,
}

impl fmt::Display for LowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (approximate lower bound over {} candidates)",
            crate::scalar::format_float(self.value),
            self.candidates
        )
    }
}

/// `sup |<xd, ab→> - <xd, cd→>| / (d(a,b) + d(c,d))` over the quadruples.
pub fn dual_norm_approx(xd: &DualVector, quadruples: &[(Point, Point, Point, Point)]) -> Result<LowerBound> {
    let mut best = 0.0f64;
    for (a, b, c, d) in quadruples {
        let denom = (distance(a, b)? + distance(c, d)?).to_f64();
        if denom == 0.0 {
            return Err(Error::Degenerate(format!(
                "quadruple ({a}, {b}, {c}, {d}) has a = b and c = d"
            )));
        }
        let num = (xd.pair_points(a, b)? - xd.pair_points(c, d)?).to_f64().abs();
        best = best.max(num / denom);
    }
    Ok(LowerBound {
        value: best,
        candidates: quadruples.len(),
    })
}

/// `Θ(t,a,b)(x) = t <ab→, ax→>`.
pub fn theta(t: &Scalar, a: &Point, b: &Point, x: &Point) -> Result<Scalar> {
    let ab = BoundVector::new(a.clone(), b.clone())?;
    let ax = BoundVector::new(a.clone(), x.clone())?;
    Ok(t * quasilinearization(&ab, &ax)?)
}

/// Lower bound of `D((t,a,b),(s,c,d))`, the Lipschitz semi-norm of
/// `Θ(t,a,b) - Θ(s,c,d)`, over the given pairs `(u, v)` with `u ≠ v`.
pub fn pseudometric_d_approx(
    first: (&Scalar, &Point, &Point),
    second: (&Scalar, &Point, &Point),
    pairs: &[(Point, Point)],
) -> Result<LowerBound> {
    if pairs.is_empty() {
        return Err(Error::Degenerate(
            "pseudometric approximation needs at least one pair".into(),
        ));
    }
    let diff = |z: &Point| -> Result<Scalar> {
        Ok(theta(first.0, first.1, first.2, z)? - theta(second.0, second.1, second.2, z)?)
    };
    let mut best = 0.0f64;
    for (u, v) in pairs {
        let d = distance(u, v)?.to_f64();
        if d == 0.0 {
            return Err(Error::Degenerate(format!("pair ({u}, {v}) has u = v")));
        }
        let num = (diff(u)? - diff(v)?).to_f64().abs();
        best = best.max(num / d);
    }
    Ok(LowerBound {
        value: best,
        candidates: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[f64]) -> Point {
        Point::euclidean(c)
    }

    fn r(n: u64, num: i64, den: i64) -> Point {
        Point::rtree(n, Scalar::ratio(num, den))
    }

    #[test]
    fn zero_dual_and_zero_vector() {
        let zd = DualVector::zero(SpaceHandle::euclidean(2));
        let bv = BoundVector::new(e(&[1.0, 2.0]), e(&[0.0, 3.0])).unwrap();
        assert_eq!(zd.pair(&bv).unwrap(), Scalar::zero());
        let xd = DualVector::bound(e(&[0.0, 0.0]), e(&[1.0, 1.0])).unwrap();
        assert_eq!(xd.pair(&BoundVector::zero(e(&[5.0, 5.0]))).unwrap(), Scalar::zero());
    }

    #[test]
    fn euclidean_pairing_is_inner_product() {
        let xd = DualVector::single(3.0, e(&[1.0, 0.0]), e(&[2.0, 2.0])).unwrap();
        let v = xd.pair_points(&e(&[0.0, 1.0]), &e(&[1.0, -1.0])).unwrap();
        // 3 <(1,2) | (1,-2)> = -9
        assert!((v.to_f64() + 9.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_space_is_an_error() {
        let xd = DualVector::bound(e(&[0.0]), e(&[1.0])).unwrap();
        let bv = BoundVector::new(r(1, 1, 2), r(2, 1, 2)).unwrap();
        assert!(matches!(xd.pair(&bv), Err(Error::SpaceMismatch(_))));
        assert!(dual_add(&xd, &DualVector::zero(SpaceHandle::rtree())).is_err());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(
            canonical_hilbert(&DualVector::zero(SpaceHandle::euclidean(2))).unwrap(),
            vec![Scalar::zero(); 2]
        );
        let xd = DualVector::single(2, e(&[0.0, 0.0]), e(&[1.0, 0.0])).unwrap();
        assert_eq!(
            canonical_hilbert(&xd).unwrap(),
            vec![Scalar::from(2.0), Scalar::from(0.0)]
        );
        let origin_x = DualVector::bound(e(&[0.0, 0.0]), e(&[0.3, -0.7])).unwrap();
        assert_eq!(
            canonical_hilbert(&origin_x).unwrap(),
            vec![Scalar::from(0.3), Scalar::from(-0.7)]
        );
        let rt = DualVector::bound(r(1, 1, 2), r(2, 1, 2)).unwrap();
        assert!(matches!(canonical_hilbert(&rt), Err(Error::NotEuclidean(_))));
    }

    #[test]
    fn translated_duals_are_equal() {
        let a = DualVector::bound(e(&[0.0, 1.0]), e(&[2.0, 3.0])).unwrap();
        let b = DualVector::bound(e(&[5.0, -1.0]), e(&[7.0, 1.0])).unwrap();
        let probes = ProbeSet::for_duals(&SpaceHandle::euclidean(2), [&a, &b]);
        assert!(dual_equal_on(&a, &b, &probes, 1e-9).unwrap());
        assert!(dual_equal_on(&a, &a, &probes, 0.0).unwrap());
    }

    #[test]
    fn rtree_distinct_sums_with_equal_action() {
        // On branch 2 the action only depends on the coefficient-weighted
        // displacement, so [r(2,1/4) r(2,3/4)] acts like 2·[r(2,1/2) r(2,3/4)].
        let a = DualVector::bound(r(2, 1, 4), r(2, 3, 4)).unwrap();
        let b = DualVector::single(2, r(2, 1, 2), r(2, 3, 4)).unwrap();
        let c = DualVector::bound(r(2, 1, 2), r(2, 3, 4)).unwrap();
        let space = SpaceHandle::rtree();
        let probes = ProbeSet::for_duals(&space, [&a, &b, &c]);
        assert!(dual_equal_on(&a, &b, &probes, 0.0).unwrap());
        assert!(!dual_equal_on(&a, &c, &probes, 1e-9).unwrap());

        // Exhaustive cross-check against a grid of bound vectors.
        let grid: Vec<Point> = (1..=3).flat_map(|n| (0..=4).map(move |k| r(n, k, 4))).collect();
        for u in &grid {
            for v in &grid {
                assert_eq!(a.pair_points(u, v).unwrap(), b.pair_points(u, v).unwrap());
            }
        }
    }

    #[test]
    fn empty_probe_set_rejected() {
        assert_eq!(ProbeSet::new(vec![]), Err(Error::EmptyProbes));
    }

    #[test]
    fn j_map_cases() {
        let a = vec![Scalar::from(1.0), Scalar::from(-1.0)];
        let eps = Scalar::from(0.5);
        let zero = j_map(&a, &eps, &[Scalar::zero(), Scalar::zero()]).unwrap();
        assert!(zero.is_formally_zero());
        let u = vec![Scalar::from(3.0), Scalar::from(4.0)];
        let j = j_map(&a, &eps, &u).unwrap();
        let c = canonical_hilbert(&j).unwrap();
        assert!(c[0].approx_eq(&u[0], 1e-12) && c[1].approx_eq(&u[1], 1e-12));
        assert!(j_map(&a, &Scalar::zero(), &u).is_err());
    }

    #[test]
    fn norm_and_pseudometric_bounds() {
        let space_pts = [e(&[0.0, 0.0]), e(&[1.0, 0.0]), e(&[0.0, 1.0]), e(&[1.0, 1.0])];
        let xd = DualVector::bound(e(&[0.0, 0.0]), e(&[1.0, 0.0])).unwrap();
        let single = [(
            space_pts[0].clone(),
            space_pts[1].clone(),
            space_pts[2].clone(),
            space_pts[2].clone(),
        )];
        let n = dual_norm_approx(&xd, &single).unwrap();
        assert!((n.value - 1.0).abs() < 1e-12);
        let zero = DualVector::zero(SpaceHandle::euclidean(2));
        assert_eq!(dual_norm_approx(&zero, &single).unwrap().value, 0.0);
        let degenerate = [(
            space_pts[0].clone(),
            space_pts[0].clone(),
            space_pts[1].clone(),
            space_pts[1].clone(),
        )];
        assert!(dual_norm_approx(&xd, &degenerate).is_err());

        let t = Scalar::from(2.0);
        let pairs = vec![(space_pts[0].clone(), space_pts[3].clone())];
        let same = pseudometric_d_approx(
            (&t, &space_pts[0], &space_pts[1]),
            (&t, &space_pts[0], &space_pts[1]),
            &pairs,
        )
        .unwrap();
        assert_eq!(same.value, 0.0);
        assert!(pseudometric_d_approx(
            (&t, &space_pts[0], &space_pts[1]),
            (&t, &space_pts[0], &space_pts[1]),
            &[]
        )
        .is_err());
    }
}
