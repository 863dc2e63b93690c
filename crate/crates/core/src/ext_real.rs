//! The extended real line `[-inf, +inf]`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(Scalar),
    PosInf,
}

impl ExtReal {
    pub fn finite(v: impl Into<Scalar>) -> Self {
        ExtReal::Finite(v.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Scalar> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v.to_f64(),
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// Addition that refuses `+inf + -inf`.
    pub fn checked_add(&self, other: &ExtReal) -> Result<ExtReal> {
        use ExtReal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::IndefiniteSum),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    pub fn add_scalar(&self, v: &Scalar) -> ExtReal {
        match self {
            ExtReal::Finite(a) => ExtReal::Finite(a + v),
            other => other.clone(),
        }
    }

    pub fn neg(&self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(v) => ExtReal::Finite(-v),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }

    /// Multiplication by a nonnegative finite factor (`0 * inf = 0`).
    pub fn scale_nonneg(&self, k: &Scalar) -> ExtReal {
        if k.is_zero() {
            return ExtReal::Finite(Scalar::zero());
        }
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v * k),
            other => other.clone(),
        }
    }

    /// Supremum; `-inf` for an empty iterator.
    pub fn sup<I: IntoIterator<Item = ExtReal>>(items: I) -> ExtReal {
        items
            .into_iter()
            .fold(ExtReal::NegInf, |acc, v| if v > acc { v } else { acc })
    }

    /// Infimum; `+inf` for an empty iterator.
    pub fn inf<I: IntoIterator<Item = ExtReal>>(items: I) -> ExtReal {
        items
            .into_iter()
            .fold(ExtReal::PosInf, |acc, v| if v < acc { v } else { acc })
    }

    /// `|a - b| <= tol`, with matching infinities considered equal.
    pub fn approx_eq(&self, other: &ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.approx_eq(b, tol),
            (a, b) => a == b,
        }
    }

    /// Absolute difference as a float; `inf` when exactly one side is infinite.
    pub fn defect(&self, other: &ExtReal) -> f64 {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs().to_f64(),
            (a, b) if a == b => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl From<Scalar> for ExtReal {
    fn from(v: Scalar) -> Self {
        ExtReal::Finite(v)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Some(Ordering::Equal),
            (NegInf, _) | (_, PosInf) => Some(Ordering::Less),
            (PosInf, _) | (_, NegInf) => Some(Ordering::Greater),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
        }
    }
}
