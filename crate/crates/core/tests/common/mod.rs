//! Shared builders and independent oracles for the integration tests.
#![allow(dead_code, unused_imports)]

use hadamard::conjugate::{CandidateUniverse, FunctionTable, PairedPoint};
use hadamard::dual::DualVector;
use hadamard::monotone::{monotonically_related, OperatorGraph};
use hadamard::{ExtReal, Point, SpaceHandle};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use hadamard::sampling::{random_point, random_points, rng};

/// Euclidean point from coordinates.
pub fn e(c: &[f64]) -> Point {
    Point::euclidean(c)
}

/// The Euclidean dual vector acting as `<u | ·>`: `[0 u→]`.
pub fn ev(u: &[f64]) -> DualVector {
    DualVector::bound(e(&vec![0.0; u.len()]), e(u)).unwrap()
}

pub fn epair(x: &[f64], u: &[f64]) -> PairedPoint {
    PairedPoint::new(e(x), ev(u)).unwrap()
}

/// Plain vector data behind a Euclidean pair built by [`epair`].
#[derive(Clone, Debug, PartialEq)]
pub struct RawPair {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

impl RawPair {
    pub fn paired(&self) -> PairedPoint {
        epair(&self.x, &self.u)
    }
}

/// All points of `values^dim`.
pub fn grid_points(values: &[f64], dim: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Product grid `X × U` of Euclidean pairs.
pub fn product_grid(xs: &[Vec<f64>], us: &[Vec<f64>]) -> Vec<RawPair> {
    xs.iter()
        .flat_map(|x| {
            us.iter().map(move |u| RawPair {
                x: x.clone(),
                u: u.clone(),
            })
        })
        .collect()
}

pub fn universe_of(raw: &[RawPair]) -> CandidateUniverse {
    CandidateUniverse::new(raw.iter().map(RawPair::paired).collect())
}

/// Random subset of `raw` with between 1 and `max` elements.
pub fn random_subset(raw: &[RawPair], max: usize, rng: &mut ChaCha8Rng) -> Vec<RawPair> {
    let k = rng.gen_range(1..=max.min(raw.len()));
    raw.choose_multiple(rng, k).cloned().collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(s, t)| s * t).sum()
}

/// Classical monotonicity `<x - y | u - w> >= 0`, evaluated directly.
pub fn raw_related(a: &RawPair, b: &RawPair) -> bool {
    let dx: Vec<f64> = a.x.iter().zip(&b.x).map(|(s, t)| s - t).collect();
    let du: Vec<f64> = a.u.iter().zip(&b.u).map(|(s, t)| s - t).collect();
    dot(&dx, &du) >= -1e-12
}

/// Greedy extension of a monotone seed over `universe` in a random order.
/// One pass suffices: a rejected candidate stays rejected as the set grows,
/// so the result is monotone and maximal relative to `universe`.
pub fn greedy_maximal(seed: &[RawPair], universe: &[RawPair], rng: &mut ChaCha8Rng) -> Vec<RawPair> {
    let mut g: Vec<RawPair> = Vec::new();
    for s in seed {
        if g.iter().all(|r| raw_related(r, s)) && !g.contains(s) {
            g.push(s.clone());
        }
    }
    let mut order: Vec<&RawPair> = universe.iter().collect();
    order.shuffle(rng);
    for c in order {
        if !g.contains(c) && g.iter().all(|r| raw_related(r, c)) {
            g.push(c.clone());
        }
    }
    g
}

pub fn graph_of(raw: &[RawPair]) -> OperatorGraph {
    let space = SpaceHandle::euclidean(raw.first().map_or(1, |r| r.x.len()));
    OperatorGraph::new(space, raw.iter().map(RawPair::paired).collect()).unwrap()
}

pub fn oracle_graph(raw: &[RawPair]) -> Vec<(Vec<f64>, Vec<f64>)> {
    raw.iter().map(|r| (r.x.clone(), r.u.clone())).collect()
}

/// Random proper table on `domain`: finite values in `[-3, 3]` with about
/// one entry in five set to `+inf` (never all of them).
pub fn random_table(p: &Point, domain: &[RawPair], rng: &mut ChaCha8Rng) -> (FunctionTable, Vec<ExtReal>) {
    let mut values: Vec<ExtReal> = domain
        .iter()
        .map(|_| {
            if rng.gen_bool(0.2) {
                ExtReal::PosInf
            } else {
                ExtReal::finite((rng.gen_range(-300..=300) as f64) / 100.0)
            }
        })
        .collect();
    if values.iter().all(|v| *v == ExtReal::PosInf) {
        values[0] = ExtReal::finite(0.0);
    }
    let entries = domain.iter().map(RawPair::paired).zip(values.iter().cloned()).collect();
    (FunctionTable::new(p.clone(), entries).unwrap(), values)
}

/// A random graph of `n` pairs in `space`; duals are single bound vectors
/// with a small coefficient.
pub fn random_graph(space: &SpaceHandle, n: usize, rng: &mut ChaCha8Rng) -> OperatorGraph {
    let pairs = (0..n).map(|_| random_pair(space, rng)).collect();
    OperatorGraph::new(*space, pairs).unwrap()
}

pub fn random_pair(space: &SpaceHandle, rng: &mut ChaCha8Rng) -> PairedPoint {
    let x = random_point(space, rng);
    let (a, b) = (random_point(space, rng), random_point(space, rng));
    let coeff = (rng.gen_range(-8..=8) as f64) / 4.0;
    PairedPoint::new(x, DualVector::single(coeff, a, b).unwrap()).unwrap()
}

/// Monotonicity of a graph, checked pairwise with the library's relation.
pub fn pairwise_monotone(pairs: &[PairedPoint], tol: f64) -> bool {
    pairs
        .iter()
        .enumerate()
        .all(|(i, a)| pairs[i + 1..].iter().all(|b| monotonically_related(a, b, tol).unwrap()))
}

pub fn all_spaces() -> [SpaceHandle; 3] {
    [
        SpaceHandle::euclidean(2),
        SpaceHandle::rtree(),
        SpaceHandle::hyperbolic(2),
    ]
}
