//! Hyperbolic space ℍⁿ in the hyperboloid model.
//!
//! Points are stored in ambient coordinates `(x_1, .., x_n, x_{n+1})` with
//! `<x, x> = -1` and `x_{n+1} > 0` for the form of signature `(-1, n)`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HyperbolicSpec {
    pub dim: usize,
}

/// Relative defect allowed in the hyperboloid constraint. Scaled by
/// `max(1, x_{n+1}^2)` because far-out points lose absolute precision.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Width of the band below 1 in which `-<x, y>` is clamped to 1.
pub const ACOSH_CLAMP: f64 = 1e-12;

/// `-x_{n+1} y_{n+1} + sum_i x_i y_i`.
pub fn minkowski_form(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SpaceMismatch(format!(
            "minkowski form of vectors with lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::OutOfRange("minkowski form needs vectors of length >= 2".into()));
    }
    Ok(form(x, y))
}

pub(crate) fn form(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() - 1;
    let space: f64 = x[..n].iter().zip(&y[..n]).map(|(a, b)| a * b).sum();
    space - x[n] * y[n]
}

/// Checks `<x, x> = -1` (relative tolerance) and `x_{n+1} > 0`.
pub fn validate(x: &[f64], dim: usize) -> Result<()> {
    if x.len() != dim + 1 {
        return Err(Error::InvalidPoint {
            reason: format!(
                "hyperbolic point of H^{dim} needs {} coordinates, got {}",
                dim + 1,
                x.len()
            ),
            defect: 0.0,
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidPoint {
            reason: "non-finite coordinate".into(),
            defect: f64::INFINITY,
        });
    }
    let last = x[dim];
    if last <= 0.0 {
        return Err(Error::InvalidPoint {
            reason: "last coordinate must be positive".into(),
            defect: (1.0 - last).max(0.0),
        });
    }
    let defect = (form(x, x) + 1.0).abs();
    if defect > CONSTRAINT_TOL * last.powi(2).max(1.0) {
        return Err(Error::InvalidPoint {
            reason: "not on the hyperboloid <x,x> = -1".into(),
            defect,
        });
    }
    Ok(())
}

/// Hyperbolic distance `cosh⁻¹(-<x, y>)`.
///
/// Near the diagonal `cosh⁻¹` is ill-conditioned, so for `-<x,y> < 2` the
/// equivalent `2 sinh⁻¹(|x - y|_M / 2)` is used instead.
pub fn distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x == y {
        return Ok(0.0);
    }
    let c = -form(x, y);
    let n = x.len() - 1;
    let scale = (x[n] * y[n]).abs().max(1.0);
    if c < 1.0 - ACOSH_CLAMP * scale {
        return Err(Error::InvalidPoint {
            reason: "cosh⁻¹ argument below 1".into(),
            defect: 1.0 - c,
        });
    }
    if c >= 2.0 {
        return Ok(c.acosh());
    }
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let chord_sq = form(&diff, &diff).max(0.0);
    Ok(2.0 * (chord_sq.sqrt() / 2.0).asinh())
}

/// `(1 - t) x ⊕ t y = cosh(t d) x + sinh(t d) z`, with
/// `z = (y + <x,y> x) / sqrt(<x,y>^2 - 1)`.
///
/// Evaluated in the algebraically equal form
/// `(sinh((1 - t) d) x + sinh(t d) y) / sinh d`, which avoids the
/// cancellation in `z` for nearby points, then renormalised onto the
/// hyperboloid. `x = y` returns `x`.
pub fn hyperbolic_geodesic(x: &[f64], y: &[f64], t: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(format!("geodesic parameter {t} outside [0, 1]")));
    }
    let d = distance(x, y)?;
    if d == 0.0 || t == 0.0 {
        return Ok(x.to_vec());
    }
    if t == 1.0 {
        return Ok(y.to_vec());
    }
    let sd = d.sinh();
    let (a, b) = (((1.0 - t) * d).sinh() / sd, (t * d).sinh() / sd);
    let mut r: Vec<f64> = x.iter().zip(y).map(|(u, v)| a * u + b * v).collect();
    let norm = (-form(&r, &r)).sqrt();
    if norm.is_finite() && norm > 0.0 {
        r.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(r)
}

/// Lifts a point of ℝⁿ to the hyperboloid by solving for the last coordinate.
pub fn lift(spatial: &[f64]) -> Vec<f64> {
    let sq: f64 = spatial.iter().map(|v| v * v).sum();
    let mut out = spatial.to_vec();
    out.push((1.0 + sq).sqrt());
    out
}
