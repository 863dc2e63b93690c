//! Default comparison tolerances. Every operation that compares floats takes
//! an explicit `tol` argument; these are the values callers start from.

/// Closed-form Euclidean and ℝ-tree quantities.
pub const CLOSED_FORM: f64 = 1e-9;

/// Hyperbolic quantities (cosh⁻¹ conditioning).
pub const HYPERBOLIC: f64 = 1e-7;

/// Comparison against values published rounded to four decimals.
pub const ROUNDED_4DP: f64 = 5e-4;

/// Band around zero in which a monotonicity gap still counts as related.
pub const RELATED: f64 = 1e-9;

/// Band around equality when sorting points into `{Φ < π}`, `{Φ = π}`, `{Φ > π}`.
pub const LEVEL_BAND: f64 = 1e-9;

/// Default λ grid for convexity-type checks along geodesics.
pub const DEFAULT_LAMBDA_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Seed of the deterministic probe sample.
pub const PROBE_SEED: u64 = 0x5EED;
