//! The ℝ-tree obtained from `ℕ × [0,1]` by gluing every `(n, 0)` to a
//! common root. Each branch `n` is a unit segment hanging off the root.
//!
//! Distances are `|t - s|` on a common branch and `t + s` across branches,
//! so all quantities built from squared distances stay exact over the
//! rationals.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Marker for the (parameter-free) ℝ-tree space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RTreeSpec;

/// An equivalence class `[(branch, t)]`; the root is stored as `[(1, 0)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RTreePoint {
    branch: u64,
    t: Scalar,
}

impl RTreePoint {
    pub fn new(branch: u64, t: Scalar) -> Result<Self> {
        if branch == 0 {
            return Err(Error::InvalidPoint {
                reason: "rtree branch indices start at 1".into(),
                defect: 0.0,
            });
        }
        if !t.is_finite() || t < Scalar::zero() || t > Scalar::one() {
            let v = t.to_f64();
            let defect = if v < 0.0 { -v } else { v - 1.0 };
            return Err(Error::InvalidPoint {
                reason: format!("rtree parameter {t} outside [0, 1]"),
                defect,
            });
        }
        if t.is_zero() {
            return Ok(Self::root());
        }
        Ok(Self { branch, t })
    }

    pub fn root() -> Self {
        Self {
            branch: 1,
            t: Scalar::zero(),
        }
    }

    pub fn branch(&self) -> u64 {
        self.branch
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    pub fn is_root(&self) -> bool {
        self.t.is_zero()
    }
}

impl fmt::Display for RTreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[({}, {})]", self.branch, self.t)
    }
}

pub fn distance(x: &RTreePoint, y: &RTreePoint) -> Scalar {
    if x.branch == y.branch {
        (&x.t - &y.t).abs()
    } else {
        &x.t + &y.t
    }
}

pub fn distance_sq(x: &RTreePoint, y: &RTreePoint) -> Scalar {
    distance(x, y).square()
}

/// Point at parameter `lambda` on the geodesic from `x` to `y`.
///
/// Across branches the path runs down to the root and up the other branch;
/// on a shared branch it interpolates linearly.
pub fn geodesic(x: &RTreePoint, y: &RTreePoint, lambda: &Scalar) -> RTreePoint {
    if x == y {
        return x.clone();
    }
    let one = Scalar::one();
    if x.branch == y.branch {
        let t = (&one - lambda) * &x.t + lambda * &y.t;
        return canonical(x.branch, t);
    }
    let total = &x.t + &y.t;
    // lambda <= t / (t + s), without dividing
    if lambda * &total <= x.t {
        let t = (&one - lambda) * &x.t - lambda * &y.t;
        canonical(x.branch, t)
    } else {
        let t = (lambda - &one) * &x.t + lambda * &y.t;
        canonical(y.branch, t)
    }
}

fn canonical(branch: u64, t: Scalar) -> RTreePoint {
    // Clamp rounding noise from float parameters.
    let t = t.max(Scalar::zero()).min(Scalar::one());
    if t.is_zero() {
        RTreePoint::root()
    } else {
        RTreePoint { branch, t }
    }
}
