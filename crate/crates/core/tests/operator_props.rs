mod common;

use common::*;
use hadamard::fitzpatrick::{
    classical_fitzpatrick_oracle, convexity_check_fitz, fitzpatrick_inf, fitzpatrick_sup, fitzpatrick_via_conjugate,
    level_set_report, FitzQuery,
};
use hadamard::monotone::{
    f_property_check, flatness_check, is_maximal_relative, is_monotone, monotone_polar_indices, monotonically_related,
    OperatorGraph,
};
use hadamard::tolerance::DEFAULT_LAMBDA_GRID;
use hadamard::{Error, ExtReal, SpaceHandle};
use proptest::prelude::*;
use rand::Rng;

fn space_strategy() -> impl Strategy<Value = SpaceHandle> {
    prop_oneof![
        Just(SpaceHandle::euclidean(2)),
        Just(SpaceHandle::rtree()),
        Just(SpaceHandle::hyperbolic(2))
    ]
}

fn grid() -> Vec<RawPair> {
    let v = [-1.0, 0.0, 1.0];
    product_grid(&grid_points(&v, 2), &grid_points(&v, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monotone_relation_is_symmetric(space in space_strategy(), seed: u64) {
        let mut rng = rng(seed);
        let (a, b) = (random_pair(&space, &mut rng), random_pair(&space, &mut rng));
        let tol = space.default_tolerance();
        prop_assert_eq!(monotonically_related(&a, &b, tol).unwrap(), monotonically_related(&b, &a, tol).unwrap());
        prop_assert!(monotonically_related(&a, &a, tol).unwrap());
    }

    #[test]
    fn polar_is_antitone(seed: u64) {
        let mut rng = rng(seed);
        let g = grid();
        let u = universe_of(&g);
        let small = random_subset(&g, 4, &mut rng);
        let mut large = small.clone();
        large.extend(random_subset(&g, 4, &mut rng));
        let to_pp = |r: &[RawPair]| r.iter().map(RawPair::paired).collect::<Vec<_>>();
        let ps = monotone_polar_indices(&to_pp(&small), &u, 1e-9).unwrap();
        let pl = monotone_polar_indices(&to_pp(&large), &u, 1e-9).unwrap();
        prop_assert!(pl.iter().all(|i| ps.contains(i)));
    }

    #[test]
    fn greedy_extension_is_maximal(seed: u64) {
        let mut rng = rng(seed);
        let g = grid();
        let m = greedy_maximal(&[], &g, &mut rng);
        let graph = graph_of(&m);
        prop_assert!(is_monotone(&graph, 1e-9).unwrap().holds);
        prop_assert!(pairwise_monotone(&graph.pairs, 1e-9));
        prop_assert!(is_maximal_relative(&graph, &universe_of(&g), 1e-9).unwrap().holds);
        // dropping any pair breaks maximality
        let fewer = graph_of(&m[1..]);
        prop_assert!(!is_maximal_relative(&fewer, &universe_of(&g), 1e-9).unwrap().holds);
    }

    #[test]
    fn three_forms_agree(space in space_strategy(), seed: u64, n in 0usize..6) {
        let mut rng = rng(seed);
        let g = random_graph(&space, n, &mut rng);
        let p = random_point(&space, &mut rng);
        let q = FitzQuery::new(p, random_pair(&space, &mut rng)).unwrap();
        let sup = fitzpatrick_sup(&g, &q).unwrap();
        let inf = fitzpatrick_inf(&g, &q).unwrap();
        let conj = fitzpatrick_via_conjugate(&g, &q, 1e-9).unwrap();
        let tol = 1e-9 * (1.0 + sup.to_f64().abs());
        prop_assert!(sup.defect(&inf) <= tol && sup.defect(&conj) <= tol, "{} {} {}", sup, inf, conj);
    }

    #[test]
    fn fitzpatrick_matches_classical_at_origin(seed: u64, x in prop::collection::vec(-2.0f64..2.0, 2),
                                               u in prop::collection::vec(-2.0f64..2.0, 2)) {
        let mut rng = rng(seed);
        let g = random_subset(&grid(), 10, &mut rng);
        let q = FitzQuery::new(e(&[0.0, 0.0]), epair(&x, &u)).unwrap();
        let lib = fitzpatrick_sup(&graph_of(&g), &q).unwrap().to_f64();
        let oracle = classical_fitzpatrick_oracle(&oracle_graph(&g), &x, &u).unwrap().to_f64();
        prop_assert!((lib - oracle).abs() <= 1e-9 * (1.0 + oracle.abs()));
    }

    #[test]
    fn monotone_graphs_sit_on_the_coupling(space in space_strategy(), seed: u64) {
        let mut rng = rng(seed);
        let cand = random_graph(&space, 6, &mut rng);
        let tol = space.default_tolerance();
        let mut pairs = Vec::new();
        for q in cand.pairs {
            if pairs.iter().all(|r| monotonically_related(r, &q, tol).unwrap()) {
                pairs.push(q);
            }
        }
        let g = OperatorGraph::new(space, pairs).unwrap();
        let p = random_point(&space, &mut rng);
        for q in &g.pairs {
            let phi = fitzpatrick_sup(&g, &FitzQuery::new(p.clone(), q.clone()).unwrap()).unwrap().to_f64();
            let pi = hadamard::conjugate::coupling_pi(&p, q).unwrap().to_f64();
            prop_assert!((phi - pi).abs() <= 1e-7 * (1.0 + pi.abs()));
        }
    }

    #[test]
    fn level_sets_match_polar(seed: u64) {
        let mut rng = rng(seed);
        let g = grid();
        let graph = graph_of(&random_subset(&g, 6, &mut rng));
        let p = e(&g[rng.gen_range(0..g.len())].x);
        let r = level_set_report(&graph, &p, &universe_of(&g), 1e-9).unwrap();
        prop_assert!(r.polar_agrees && r.consistent());
        prop_assert_eq!(r.below.len() + r.equal.len() + r.above.len(), g.len());
    }

    #[test]
    fn euclidean_has_the_f_property(seed: u64) {
        let space = SpaceHandle::euclidean(2);
        let mut rng = rng(seed);
        let m: Vec<_> = (0..4).map(|_| random_pair(&space, &mut rng)).collect();
        let p = random_point(&space, &mut rng);
        prop_assert!(f_property_check(&m, &p, &DEFAULT_LAMBDA_GRID, 1e-9).unwrap().holds());
    }

    #[test]
    fn euclidean_fitzpatrick_is_convex(seed: u64) {
        let mut rng = rng(seed);
        let g = graph_of(&random_subset(&grid(), 6, &mut rng));
        let space = SpaceHandle::euclidean(2);
        let pairs: Vec<_> = (0..3).map(|_| (random_pair(&space, &mut rng), random_pair(&space, &mut rng))).collect();
        let r = convexity_check_fitz(&g, &e(&[0.0, 0.0]), &pairs, &DEFAULT_LAMBDA_GRID, 1e-9).unwrap();
        prop_assert!(r.report.holds && r.skipped.is_empty());
    }
}

#[test]
fn empty_graph_fitzpatrick_is_neg_inf() {
    for space in all_spaces() {
        let mut rng = rng(2);
        let q = FitzQuery::new(random_point(&space, &mut rng), random_pair(&space, &mut rng)).unwrap();
        assert_eq!(
            fitzpatrick_sup(&OperatorGraph::empty(space), &q).unwrap(),
            ExtReal::NegInf
        );
    }
}

#[test]
fn flatness_separates_the_spaces() {
    for space in all_spaces() {
        let mut rng = rng(12);
        let triples: Vec<_> = (0..50)
            .map(|_| {
                (
                    random_point(&space, &mut rng),
                    random_point(&space, &mut rng),
                    random_point(&space, &mut rng),
                )
            })
            .collect();
        let r = flatness_check(&space, &triples, &DEFAULT_LAMBDA_GRID, space.default_tolerance()).unwrap();
        assert_eq!(r.holds, space.kind == hadamard::SpaceKind::Euclidean, "{space}");
    }
}

#[test]
fn maximality_needs_the_graph_inside_the_universe() {
    let g = graph_of(&[RawPair {
        x: vec![5.0, 5.0],
        u: vec![0.0, 0.0],
    }]);
    assert!(matches!(
        is_maximal_relative(&g, &universe_of(&grid()), 1e-9),
        Err(Error::NotInUniverse(_))
    ));
}

#[test]
fn f_property_rejects_lambda_outside_unit_interval() {
    let m = vec![epair(&[0.0], &[1.0])];
    assert!(f_property_check(&m, &e(&[0.0]), &[1.5], 1e-9).is_err());
}
