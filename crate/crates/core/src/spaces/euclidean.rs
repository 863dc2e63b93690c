//! Euclidean space ℝⁿ as a flat Hadamard space.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EuclideanSpec {
    pub dim: usize,
}

pub fn distance_sq(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).map(|(a, b)| (a - b).square()).sum()
}

/// `(1 - t) x + t y`, written so that both endpoints are reproduced exactly.
pub fn geodesic(x: &[Scalar], y: &[Scalar], t: &Scalar) -> Vec<Scalar> {
    let s = Scalar::one() - t;
    x.iter().zip(y).map(|(a, b)| &s * a + t * b).collect()
}

pub fn inner(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn sub(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn norm(x: &[Scalar]) -> Scalar {
    inner(x, x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from(x)).collect()
    }

    #[test]
    fn three_four_five() {
        assert_eq!(distance_sq(&v(&[0, 0]), &v(&[3, 4])).sqrt(), Scalar::from(5));
    }

    #[test]
    fn quarter_point() {
        let r = geodesic(&v(&[0, 0]), &v(&[2, 0]), &Scalar::ratio(1, 4));
        assert_eq!(r, vec![Scalar::ratio(1, 2), Scalar::zero()]);
    }
}
