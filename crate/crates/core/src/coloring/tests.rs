use itertools::Itertools;
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::BoxShape;
use crate::graph::build_intersection_graph;
use crate::num::qr;

/// `L_r(v)` by enumerating every simple path of length at most `r` from `v`.
fn reach_by_paths(g: &Graph, ord: &Ordering, r: usize, v: usize) -> Vec<usize> {
    fn walk(g: &Graph, ord: &Ordering, r: usize, v: usize, at: usize, len: usize, on: &mut Vec<bool>, out: &mut Vec<usize>) {
        if len == r {
            return;
        }
        for &w in g.neighbors(at) {
            if on[w] {
                continue;
            }
            if ord.precedes(w, v) {
                out.push(w);
            } else {
                on[w] = true;
                walk(g, ord, r, v, w, len + 1, on, out);
                on[w] = false;
            }
        }
    }
    let mut out = vec![v];
    let mut on = vec![false; g.n()];
    on[v] = true;
    walk(g, ord, r, v, v, 0, &mut on, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<_> = (0..n).tuple_combinations().filter(|_| rng.random_bool(p)).collect();
    Graph::from_edges(n, edges).unwrap()
}

fn random_ordering(rng: &mut ChaCha8Rng, n: usize) -> Ordering {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
    Ordering::new(v).unwrap()
}

fn col_by_orderings(g: &Graph, r: usize) -> usize {
    (0..g.n())
        .permutations(g.n())
        .map(|p| col_profile(g, &Ordering::new(p).unwrap(), r).unwrap().entries[r - 1].value)
        .min()
        .unwrap()
}

fn boxes(rs: &[(i64, i64, i64, i64)]) -> Representation {
    Representation::new(
        rs.iter()
            .map(|&(a, b, c, d)| PlacedShape::at_origin(Shape::Box(BoxShape::from_ints(&[a, b], &[c, d]).unwrap())))
            .collect(),
    )
    .unwrap()
}

#[test]
fn ordering_rejects_non_permutations() {
    assert!(Ordering::new(vec![0, 0, 1]).is_err());
    assert!(Ordering::new(vec![0, 3]).is_err());
    let o: Ordering = serde_json::from_str("[2,0,1]").unwrap();
    assert_eq!(o.position(2), 0);
    assert!(serde_json::from_str::<Ordering>("[1,1]").is_err());
}

#[test]
fn reach_set_examples() {
    let p3 = Graph::path(3);
    let id = Ordering::identity(3);
    assert_eq!(reach_set(&p3, &id, 2, 2).unwrap(), vec![1, 2]);
    assert_eq!(reach_set(&p3, &id, 0, 1).unwrap(), vec![1]);
    assert_eq!(reach_set(&Graph::complete(4), &Ordering::new(vec![2, 0, 3, 1]).unwrap(), 1, 1).unwrap(), vec![0, 1, 2, 3]);
    assert!(matches!(reach_set(&p3, &id, 1, 7), Err(Error::UnknownVertex(7))));
}

#[test]
fn reach_set_matches_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=10);
        let p = rng.random_range(0.1..0.6);
        let g = random_graph(&mut rng, n, p);
        let ord = random_ordering(&mut rng, n);
        for r in 0..=6 {
            for v in 0..n {
                assert_eq!(reach_set(&g, &ord, r, v).unwrap(), reach_by_paths(&g, &ord, r, v));
            }
        }
    }
}

#[test]
fn profile_examples() {
    let p10 = Graph::path(10);
    assert_eq!(col_profile(&p10, &Ordering::identity(10), 9).unwrap().values(), vec![2; 9]);
    let k6 = Graph::complete(6);
    let prof = col_profile(&k6, &Ordering::new(vec![3, 1, 4, 0, 5, 2]).unwrap(), 3).unwrap();
    assert_eq!(prof.values(), vec![6; 3]);
    assert_eq!(prof.entries[0].argmax, 2);
}

#[test]
fn exact_coloring_examples() {
    assert_eq!(strong_coloring_number_exact(&Graph::complete(3), 1).unwrap().0, 3);
    for r in 1..5 {
        assert_eq!(strong_coloring_number_exact(&Graph::path(3), r).unwrap().0, 2);
    }
    assert_eq!(strong_coloring_number_exact(&Graph::cycle(5), 2).unwrap().0, 3);
    assert!(matches!(strong_coloring_number_exact(&Graph::path(10), 1), Err(Error::SizeCap { cap: 9, .. })));
}

#[test]
fn exact_coloring_matches_ordering_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let n = rng.random_range(1..=6);
        let g = random_graph(&mut rng, n, 0.5);
        for r in 1..=3 {
            let (value, witness) = strong_coloring_number_exact(&g, r).unwrap();
            assert_eq!(value, col_by_orderings(&g, r));
            assert_eq!(col_profile(&g, &witness, r).unwrap().entries[r - 1].value, value);
        }
    }
}

#[test]
fn volume_ordering_examples() {
    let r = boxes(&[(0, 0, 2, 2), (0, 0, 1, 1), (0, 0, 1, 2)]);
    assert_eq!(volume_ordering(&r).unwrap().order(), &[0, 2, 1]);
    let r = boxes(&[(0, 0, 1, 1), (5, 5, 6, 6), (9, 9, 10, 10)]);
    assert_eq!(volume_ordering(&r).unwrap().order(), &[0, 1, 2]);
}

#[test]
fn delta_bound_examples() {
    assert_eq!(delta_bound(&q(1), &q(1), 1, &q(1)).unwrap(), q(6));
    assert_eq!(delta_bound(&q(4), &q(1), 3, &q(1)).unwrap(), q(5832));
    assert_eq!(delta_bound(&q(1), &q(1), 2, &q(2)).unwrap(), q(200));
    assert!(delta_bound(&qr(1, 2), &q(1), 2, &q(2)).is_err());
}

#[test]
fn bound_violations_compare_exactly() {
    let prof = ColoringProfile { entries: vec![ColEntry { r: 1, value: 6, argmax: 0 }, ColEntry { r: 2, value: 24, argmax: 0 }] };
    assert!(prof.bound_violations(&q(6), 2).is_empty());
    assert_eq!(prof.bound_violations(&q(6), 1), vec![2]);
}

#[test]
fn tame_boxes_meet_all_conditions() {
    // Two large squares and three unit squares; 3-thin.
    let r = boxes(&[(0, 0, 4, 4), (4, 0, 8, 4), (3, 3, 4, 4), (2, 2, 3, 3), (7, 3, 8, 4)]);
    let g = build_intersection_graph(&r).unwrap();
    let ord = volume_ordering(&r).unwrap();
    let gr = GeneralizedRep::from_representation(&r);
    let rep = verify_generalized_conditions(&gr, &g, &ord, 3, &q(4), &q(16)).unwrap();
    assert!(rep.all_pass(), "{rep:?}");
    assert_eq!(rep.comparability.status, CertStatus::Exact);
}

#[test]
fn larger_inner_shape_fails_containment() {
    let r = boxes(&[(0, 0, 1, 1), (3, 3, 4, 4)]);
    let mut gr = GeneralizedRep::from_representation(&r);
    gr.inner[1] = PlacedShape::at_origin(Shape::Box(BoxShape::from_ints(&[2, 2], &[5, 5]).unwrap()));
    let g = Graph::empty(2);
    let rep = verify_generalized_conditions(&gr, &g, &Ordering::identity(2), 2, &q(9), &q(9)).unwrap();
    assert!(!rep.containment.passed);
    assert_eq!(rep.containment.violations[0].vertices, vec![1]);
}

#[test]
fn edge_between_separated_shapes_fails_condition_d() {
    let r = boxes(&[(0, 0, 1, 1), (3, 3, 4, 4)]);
    let g = Graph::path(2);
    let gr = GeneralizedRep::from_representation(&r);
    let rep = verify_generalized_conditions(&gr, &g, &Ordering::identity(2), 2, &q(1), &q(1)).unwrap();
    assert!(!rep.edges.passed);
    assert_eq!(rep.edges.violations[0].vertices, vec![0, 1]);
    assert!(rep.containment.passed && rep.thinness.passed && rep.comparability.passed);
}

#[test]
fn crossed_rectangles_fail_comparability_at_small_s() {
    let r = boxes(&[(0, 1, 4, 2), (1, 0, 2, 4)]);
    let g = build_intersection_graph(&r).unwrap();
    let gr = GeneralizedRep::from_representation(&r);
    let ord = Ordering::identity(2);
    let rep = verify_generalized_conditions(&gr, &g, &ord, 2, &q(4), &q(2)).unwrap();
    assert!(!rep.comparability.passed);
    assert!(verify_generalized_conditions(&gr, &g, &ord, 2, &q(4), &q(4)).unwrap().all_pass());
}

fn arb_graph() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (1usize..9).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        let m = pairs.len();
        (prop::collection::vec(any::<bool>(), m), Just(n), Just(pairs), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|(keep, n, pairs, perm)| {
                let e = pairs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e);
                (Graph::from_edges(n, e).unwrap(), perm)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn profile_is_monotone_and_bounded((g, perm) in arb_graph()) {
        let ord = Ordering::new(perm).unwrap();
        let vals = col_profile(&g, &ord, 6).unwrap().values();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(vals.iter().all(|&v| 1 <= v && v <= g.n()));
    }

    #[test]
    fn exact_value_is_below_every_ordering((g, perm) in arb_graph(), r in 1usize..4) {
        let ord = Ordering::new(perm).unwrap();
        let exact = strong_coloring_number_exact(&g, r).unwrap().0;
        prop_assert!(exact <= col_profile(&g, &ord, r).unwrap().entries[r - 1].value);
    }
}
