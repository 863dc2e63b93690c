//! Seeded random points for probes, tests and sampled property checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, SpaceHandle, SpaceKind};
use crate::scalar::Scalar;
use crate::spaces::hyperbolic;

/// Denominator of sampled ℝ-tree parameters, keeping them rational.
pub const RTREE_DENOM: i64 = 24;

/// Number of branches sampled ℝ-tree points are drawn from.
pub const RTREE_BRANCHES: u64 = 4;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a point: Euclidean coordinates in `[-2, 2]`, ℝ-tree parameters
/// `k / 24` on branches `1..=4`, hyperbolic lifts of `[-1.5, 1.5]^n`.
pub fn random_point<R: Rng + ?Sized>(space: &SpaceHandle, rng: &mut R) -> Point {
    match space.kind {
        SpaceKind::Euclidean => Point::Euclidean(
            (0..space.dim)
                .map(|_| Scalar::from(rng.gen_range(-2.0..=2.0)))
                .collect(),
        ),
        SpaceKind::RTree => {
            let branch = rng.gen_range(1..=RTREE_BRANCHES);
            let k = rng.gen_range(0..=RTREE_DENOM);
            Point::rtree(branch, Scalar::ratio(k, RTREE_DENOM))
        }
        SpaceKind::Hyperbolic => {
            let spatial: Vec<f64> = (0..space.dim).map(|_| rng.gen_range(-1.5..=1.5)).collect();
            Point::Hyperbolic(hyperbolic::lift(&spatial))
        }
    }
}

pub fn random_points<R: Rng + ?Sized>(space: &SpaceHandle, n: usize, rng: &mut R) -> Vec<Point> {
    (0..n).map(|_| random_point(space, rng)).collect()
}
