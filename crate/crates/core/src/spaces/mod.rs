//! Concrete Hadamard spaces: Euclidean ℝⁿ, the ℝ-tree, and hyperbolic ℍⁿ.

pub mod euclidean;
pub mod hyperbolic;
pub mod rtree;

pub use euclidean::EuclideanSpec;
pub use hyperbolic::{hyperbolic_geodesic, minkowski_form, HyperbolicSpec};
pub use rtree::{RTreePoint, RTreeSpec};

use crate::error::{Error, Result};
use crate::geometry::{Point, SpaceHandle, SpaceKind};
use crate::scalar::Scalar;

/// Raw coordinates of a point before validation.
#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Vector(Vec<Scalar>),
    Branch(u64, Scalar),
}

/// Validates `payload` against `space` and returns the canonical point.
pub fn make_point(space: &SpaceHandle, payload: Payload) -> Result<Point> {
    let point = match (space.kind, payload) {
        (SpaceKind::Euclidean, Payload::Vector(v)) => Point::Euclidean(v),
        (SpaceKind::Hyperbolic, Payload::Vector(v)) => Point::Hyperbolic(v.iter().map(Scalar::to_f64).collect()),
        (SpaceKind::RTree, Payload::Branch(n, t)) => Point::RTree(RTreePoint::new(n, t)?),
        (kind, payload) => {
            return Err(Error::InvalidPoint {
                reason: format!("payload {payload:?} does not fit a {kind} space"),
                defect: 0.0,
            })
        }
    };
    space.validate(&point)?;
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rtree_root_is_canonical() {
        let p = make_point(&SpaceHandle::rtree(), Payload::Branch(7, Scalar::zero())).unwrap();
        assert_eq!(p, Point::RTree(RTreePoint::root()));
    }

    #[test]
    fn hyperbolic_constraint() {
        let h = SpaceHandle::hyperbolic(2);
        let ok = Payload::Vector(vec![1.0.into(), 0.0.into(), std::f64::consts::SQRT_2.into()]);
        assert!(make_point(&h, ok).is_ok());
        let bad = Payload::Vector(vec![1.0.into(), 0.0.into(), 1.0.into()]);
        match make_point(&h, bad) {
            Err(Error::InvalidPoint { defect, .. }) => assert!((defect - 1.0).abs() < 1e-12),
            other => panic!("expected constraint violation, got {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch() {
        let e = SpaceHandle::euclidean(2);
        assert!(make_point(&e, Payload::Branch(1, Scalar::zero())).is_err());
        assert!(make_point(&e, Payload::Vector(vec![Scalar::zero()])).is_err());
    }
}
