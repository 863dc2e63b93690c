//! Real numbers that stay exact while every input is rational.
//!
//! A [`Scalar`] is either an exact [`BigRational`] or an `f64`. Arithmetic
//! between two exact values is exact; as soon as a float is involved the
//! result degrades to a float. This is what lets the ℝ-tree computations
//! reproduce values such as `-7/6` bit-for-bit while hyperbolic geometry
//! runs in ordinary floating point.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    /// Exact `numer / denom`. Panics when `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Scalar::Exact(BigRational::new(numer.into(), denom.into()))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(f) => f.is_finite(),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(f) => Scalar::Float(f.abs()),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Square root; exact when the argument is the square of a rational.
    pub fn sqrt(&self) -> Self {
        if let Scalar::Exact(r) = self {
            if !r.is_negative() {
                let (n, d) = (r.numer(), r.denom());
                let (rn, rd) = (n.sqrt(), d.sqrt());
                if &(&rn * &rn) == n && &(&rd * &rd) == d {
                    return Scalar::Exact(BigRational::new(rn, rd));
                }
            }
        }
        Scalar::Float(self.to_f64().sqrt())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `|self - other| <= tol`.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        (self - other).abs().to_f64() <= tol
    }

    /// Lossy conversion to an exact value (floats become their binary rational).
    pub fn to_exact(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact(r) => Some(r.clone()),
            Scalar::Float(f) => BigRational::from_float(*f),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Float(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(v.into()))
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Exact(v)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self) $op rhs
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self $op (&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for &Scalar {
    type Output = Scalar;
    /// Exact division by an exact zero falls back to float semantics.
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) if !b.is_zero() => Scalar::Exact(a / b),
            _ => Scalar::Float(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, v| acc + v)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

/// Formats a float with 12 significant digits, trimming trailing zeros.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let rounded = round_sig(v, 12);
    format!("{rounded}")
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(v) => f.write_str(&format_float(*v)),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `n`, `n/d` (exact) and decimal/scientific literals (float).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a number: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Scalar::Exact(BigRational::new(n, d)));
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(Scalar::Exact(BigRational::from_integer(n)));
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(bad());
        }
        Ok(Scalar::Float(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        let s = &a + &b;
        assert!(s.is_exact());
        assert_eq!(s, Scalar::ratio(1, 2));
        assert_eq!((&a * &b), Scalar::ratio(1, 18));
        assert_eq!((&a - &b), Scalar::ratio(1, 6));
    }

    #[test]
    fn mixing_with_float_degrades() {
        let s = Scalar::ratio(1, 2) + Scalar::from(0.25);
        assert!(!s.is_exact());
        assert_eq!(s.to_f64(), 0.75);
    }

    #[test]
    fn sqrt_of_rational_square_is_exact() {
        assert_eq!(Scalar::from(25).sqrt(), Scalar::from(5));
        assert!(Scalar::ratio(9, 4).sqrt().is_exact());
        assert!(!Scalar::from(2).sqrt().is_exact());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let v: Scalar = "7/6".parse().unwrap();
        assert_eq!(v, Scalar::ratio(7, 6));
        assert_eq!(v.to_string(), "7/6");
        assert_eq!("-14/12".parse::<Scalar>().unwrap().to_string(), "-7/6");
        assert_eq!("3".parse::<Scalar>().unwrap().to_string(), "3");
        assert!("0.5".parse::<Scalar>().unwrap() == Scalar::from(0.5));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn float_formatting_uses_twelve_digits() {
        assert_eq!(format_float(0.6816030432530656), "0.681603043253");
        assert_eq!(format_float(5.0), "5");
        assert_eq!(format_float(-1.0 / 3.0), "-0.333333333333");
    }
}
