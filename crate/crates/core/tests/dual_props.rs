mod common;

use common::*;
use hadamard::dual::{
    canonical_hilbert, chain_split_check, dual_add, dual_equal_on, dual_scale, dual_sub, j_map, DualTerm, DualVector,
    ProbeSet,
};
use hadamard::{BoundVector, Point, Scalar, SpaceHandle};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn space_strategy() -> impl Strategy<Value = SpaceHandle> {
    prop_oneof![
        (1usize..=3).prop_map(SpaceHandle::euclidean),
        Just(SpaceHandle::rtree()),
        (1usize..=3).prop_map(SpaceHandle::hyperbolic),
    ]
}

fn random_dual(space: &SpaceHandle, terms: usize, rng: &mut ChaCha8Rng) -> DualVector {
    let terms = (0..terms)
        .map(|_| DualTerm {
            coeff: Scalar::from(rng.gen_range(-3.0..3.0)),
            bv: BoundVector::new(random_point(space, rng), random_point(space, rng)).unwrap(),
        })
        .collect();
    DualVector::new(*space, terms).unwrap()
}

proptest! {
    #[test]
    fn pairing_is_linear_in_the_dual(space in space_strategy(), seed: u64, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let mut rng = rng(seed);
        let (xd, yd) = (random_dual(&space, 2, &mut rng), random_dual(&space, 3, &mut rng));
        let (x, y) = (random_point(&space, &mut rng), random_point(&space, &mut rng));
        let combo = dual_add(&dual_scale(&Scalar::from(a), &xd), &dual_scale(&Scalar::from(b), &yd)).unwrap();
        let lhs = combo.pair_points(&x, &y).unwrap().to_f64();
        let rhs = a * xd.pair_points(&x, &y).unwrap().to_f64() + b * yd.pair_points(&x, &y).unwrap().to_f64();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + rhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn chain_split(space in space_strategy(), seed: u64) {
        let mut rng = rng(seed);
        let xd = random_dual(&space, 3, &mut rng);
        let p = random_points(&space, 3, &mut rng);
        prop_assert!(chain_split_check(&xd, &p[0], &p[1], &p[2], 1e-8).unwrap());
    }

    #[test]
    fn difference_with_itself_is_zero_on_probes(space in space_strategy(), seed: u64) {
        let mut rng = rng(seed);
        let xd = random_dual(&space, 2, &mut rng);
        let diff = dual_sub(&xd, &xd).unwrap();
        let probes = ProbeSet::for_duals(&space, [&xd]);
        prop_assert!(dual_equal_on(&diff, &DualVector::zero(space), &probes, 1e-9).unwrap());
    }

    #[test]
    fn euclidean_canonical_form_decides_the_action(seed: u64) {
        let space = SpaceHandle::euclidean(3);
        let mut rng = rng(seed);
        let xd = random_dual(&space, 4, &mut rng);
        let u: Vec<f64> = canonical_hilbert(&xd).unwrap().iter().map(Scalar::to_f64).collect();
        let (x, y) = (random_point(&space, &mut rng), random_point(&space, &mut rng));
        let c = |p: &Point| -> Vec<f64> {
            match p {
                Point::Euclidean(v) => v.iter().map(Scalar::to_f64).collect(),
                _ => unreachable!(),
            }
        };
        let (cx, cy) = (c(&x), c(&y));
        let inner: f64 = (0..3).map(|i| u[i] * (cy[i] - cx[i])).sum();
        let pairing = xd.pair_points(&x, &y).unwrap().to_f64();
        prop_assert!((inner - pairing).abs() <= 1e-9 * (1.0 + inner.abs()));
        // the single-term representative acts the same way
        prop_assert!(dual_equal_on(&xd, &ev(&u), &ProbeSet::default_for(&space, &[]), 1e-9).unwrap());
    }

    #[test]
    fn j_map_represents_the_vector(a in prop::collection::vec(-2.0f64..2.0, 2),
                                   u in prop::collection::vec(-2.0f64..2.0, 2),
                                   eps in 0.1f64..2.0) {
        let to_s = |v: &[f64]| v.iter().copied().map(Scalar::from).collect::<Vec<_>>();
        let jd = j_map(&to_s(&a), &Scalar::from(eps), &to_s(&u)).unwrap();
        let canon: Vec<f64> = canonical_hilbert(&jd).unwrap().iter().map(Scalar::to_f64).collect();
        for (c, ui) in canon.iter().zip(&u) {
            prop_assert!((c - ui).abs() <= 1e-9);
        }
    }
}

fn sampled_equal(a: &DualVector, b: &DualVector) -> bool {
    let s = SpaceHandle::rtree();
    let mut r = rng(3);
    (0..200).all(|_| {
        let (x, y) = (random_point(&s, &mut r), random_point(&s, &mut r));
        a.pair_points(&x, &y).unwrap() == b.pair_points(&x, &y).unwrap()
    })
}

#[test]
fn formally_distinct_rtree_sums_can_be_equal() {
    // 2 [root (1,½)→] and [root (1,1)→] differ only by a constant in G
    let root = Point::rtree(1, Scalar::zero());
    let a = DualVector::bound(root.clone(), Point::rtree(1, Scalar::one())).unwrap();
    let b = DualVector::single(2, root.clone(), Point::rtree(1, Scalar::ratio(1, 2))).unwrap();
    let probes = ProbeSet::for_duals(&SpaceHandle::rtree(), [&a, &b]);
    assert_ne!(a, b);
    assert!(dual_equal_on(&a, &b, &probes, 1e-12).unwrap());
    assert!(sampled_equal(&a, &b));

    // reversing across branches changes the slope on untouched branches
    let c = DualVector::bound(Point::rtree(2, Scalar::one()), root).unwrap();
    assert!(!dual_equal_on(&a, &c, &ProbeSet::for_duals(&SpaceHandle::rtree(), [&a, &c]), 1e-12).unwrap());
    assert!(!sampled_equal(&a, &c));
}

#[test]
fn mixed_space_duals_are_rejected() {
    let xd = ev(&[1.0, 0.0]);
    let yd = DualVector::bound(Point::rtree(1, Scalar::one()), Point::rtree(2, Scalar::one())).unwrap();
    assert!(dual_add(&xd, &yd).is_err());
    assert!(xd
        .pair_points(&Point::rtree(1, Scalar::one()), &Point::rtree(2, Scalar::one()))
        .is_err());
}
