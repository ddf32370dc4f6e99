use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::{BoxShape, BoxUnion, ConvexPolytope, PlacedShape, Shape};
use crate::num::{q, qr, Q};

fn boxed(lo: &[i64], hi: &[i64]) -> PlacedShape {
    PlacedShape::at_origin(Shape::Box(BoxShape::from_ints(lo, hi).unwrap()))
}

fn rep(p: Vec<PlacedShape>) -> Representation {
    Representation::new(p).unwrap()
}

/// Boxes on a coarse grid so that touching and coincident faces are common.
fn random_boxes(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<BoxShape> {
    (0..n)
        .map(|_| {
            let lo: Vec<i64> = (0..d).map(|_| rng.random_range(0..20)).collect();
            let hi: Vec<i64> = lo.iter().map(|l| l + rng.random_range(1..6)).collect();
            BoxShape::from_ints(&lo, &hi).unwrap()
        })
        .collect()
}

fn box_rep(boxes: &[BoxShape]) -> Representation {
    rep(boxes.iter().map(|b| PlacedShape::at_origin(Shape::Box(b.clone()))).collect())
}

#[test]
fn graph_rejects_loops_and_bad_vertices() {
    assert!(Graph::from_edges(3, [(0, 0)]).is_err());
    assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    let g = Graph::from_edges(3, [(0, 1), (1, 0), (2, 1)]).unwrap();
    assert_eq!(g.m(), 2);
    assert_eq!(g.neighbors(1), &[0, 2]);
}

#[test]
fn grid_edges_by_coordinates() {
    let (w, h) = (4, 3);
    let g = Graph::grid(w, h);
    assert_eq!(g.m(), (w - 1) * h + w * (h - 1));
    for (a, b) in (0..w * h).flat_map(|a| (0..w * h).map(move |b| (a, b))) {
        let (ax, ay, bx, by) = (a % w, a / w, b % w, b / w);
        assert_eq!(g.has_edge(a, b), ax.abs_diff(bx) + ay.abs_diff(by) == 1);
    }
}

#[test]
fn graph_json_round_trip() {
    let g = Graph::cycle(5);
    let s = serde_json::to_string(&g).unwrap();
    assert_eq!(s, r#"{"n":5,"edges":[[0,1],[0,4],[1,2],[2,3],[3,4]]}"#);
    assert_eq!(serde_json::from_str::<Graph>(&s).unwrap(), g);
}

#[test]
fn components_and_induced() {
    let g = Graph::path(5);
    let removed = [false, false, true, false, false];
    assert_eq!(g.components_without(&removed), vec![vec![0, 1], vec![3, 4]]);
    let h = g.induced(&[1, 2, 4]);
    assert_eq!(h.edges(), vec![(0, 1)]);
}

#[test]
fn disjoint_squares_give_no_edge() {
    let r = rep(vec![boxed(&[0, 0], &[1, 1]), boxed(&[2, 0], &[3, 1])]);
    assert_eq!(build_intersection_graph(&r).unwrap().m(), 0);
}

#[test]
fn touching_squares_are_adjacent() {
    let r = rep(vec![boxed(&[0, 0], &[1, 1]), boxed(&[1, 1], &[2, 2])]);
    assert!(build_intersection_graph(&r).unwrap().has_edge(0, 1));
}

#[test]
fn sweep_matches_pairwise_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..100 {
        let d = 1 + t % 3;
        let n = rng.random_range(1..60);
        let r = box_rep(&random_boxes(&mut rng, n, d));
        assert_eq!(build_intersection_graph(&r).unwrap(), build_intersection_graph_pairwise(&r).unwrap());
    }
}

#[test]
fn polytope_graph_matches_box_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let boxes = random_boxes(&mut rng, 15, 2);
        let polys = rep(boxes
            .iter()
            .map(|b| PlacedShape::at_origin(Shape::Polytope(b.to_polytope().unwrap())))
            .collect());
        assert_eq!(build_intersection_graph(&polys).unwrap(), build_intersection_graph(&box_rep(&boxes)).unwrap());
    }
}

#[test]
fn single_shape_thinness_is_one() {
    let t = thinness(&rep(vec![boxed(&[0, 0], &[1, 1])])).unwrap();
    assert_eq!(t.c, 1);
    assert_eq!(t.status, CertStatus::Exact);
}

#[test]
fn box_thinness_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..150 {
        let d = 1 + t % 3;
        let n = rng.random_range(1..=50);
        let boxes = random_boxes(&mut rng, n, d);
        let th = thinness(&box_rep(&boxes)).unwrap();
        assert_eq!(th.c, thinness_brute_force(&boxes));
        assert_eq!(th.members.len(), th.c);
    }
}

#[test]
fn corner_shared_by_four_squares_counts_four() {
    let r = rep(vec![
        boxed(&[0, 0], &[1, 1]),
        boxed(&[1, 0], &[2, 1]),
        boxed(&[0, 1], &[1, 2]),
        boxed(&[1, 1], &[2, 2]),
    ]);
    let th = thinness(&r).unwrap();
    assert_eq!(th.c, 4);
    assert_eq!(th.witness, Some(vec![1.0, 1.0]));
}

#[test]
fn sampled_thinness_finds_triple_overlap_of_triangles() {
    let tri = |x: f64| {
        let p = ConvexPolytope::from_points(2, vec![vec![x, 0.0], vec![x + 2.0, 0.0], vec![x + 1.0, 2.0]]).unwrap();
        PlacedShape::at_origin(Shape::Polytope(p))
    };
    // Pairwise overlaps only where consecutive triangles meet.
    let th = thinness(&rep(vec![tri(0.0), tri(1.5), tri(3.0)])).unwrap();
    assert_eq!(th.c, 2);
    assert_eq!(th.status, CertStatus::SampledOnly);
    let th = thinness(&rep(vec![tri(0.0), tri(0.5), tri(1.0)])).unwrap();
    assert_eq!(th.c, 3);
}

#[test]
fn coincident_squares_fail_two_thinness() {
    let r = rep(vec![boxed(&[0, 0], &[1, 1]); 3]);
    let cert = check_tame(&r, 2, &q(1)).unwrap();
    assert!(!cert.certified);
    let Some(TameFailure::Thinness { point, vertices }) = cert.failures.first() else { panic!("{cert:?}") };
    assert_eq!(vertices, &vec![0, 1, 2]);
    assert!(point.iter().all(|x| (0.0..=1.0).contains(x)));
    assert_eq!(cert.status, CertStatus::Exact);
}

#[test]
fn crossed_rectangles_need_s_four() {
    let r = rep(vec![boxed(&[0, 1], &[4, 2]), boxed(&[1, 0], &[2, 4])]);
    let at1 = check_tame(&r, 2, &q(1)).unwrap();
    assert!(!at1.certified);
    assert!(matches!(at1.failures[0], TameFailure::Incomparable { pair: (0, 1), .. }));
    let at4 = check_tame(&r, 2, &q(4)).unwrap();
    assert!(at4.certified, "{at4:?}");
    assert_eq!(at4.s_star.unwrap().as_exact(), Some(&q(4)));
}

#[test]
fn union_shape_is_rejected_as_non_convex() {
    let l = BoxUnion::new(vec![BoxShape::from_ints(&[0, 0], &[2, 1]).unwrap(), BoxShape::from_ints(&[0, 0], &[1, 2]).unwrap()])
        .unwrap();
    let r = rep(vec![PlacedShape::at_origin(Shape::Union(l)), boxed(&[5, 5], &[6, 6])]);
    let cert = check_tame(&r, 2, &q(1)).unwrap();
    assert!(!cert.certified);
    assert!(cert.failures.contains(&TameFailure::NonConvex { vertex: 0 }));
}

#[test]
fn four_disjoint_intervals_give_disjoint_branch() {
    let boxes: Vec<_> = (0..4).map(|i| BoxShape::from_ints(&[2 * i], &[2 * i + 1]).unwrap()).collect();
    let cert = boxes_dichotomy(&boxes, 2).unwrap();
    assert_eq!(cert, Dichotomy::Disjoint { axis: 0, members: vec![0, 1] });
    assert!(verify_dichotomy(&boxes, 2, &cert));
}

#[test]
fn identical_boxes_give_common_branch() {
    let boxes = vec![BoxShape::from_ints(&[0, 0, 0], &[1, 2, 3]).unwrap(); 7];
    for k in 2..5 {
        let cert = boxes_dichotomy(&boxes, k).unwrap();
        let Dichotomy::Common { members, .. } = &cert else { panic!() };
        assert_eq!(members.len(), 7);
        assert!(verify_dichotomy(&boxes, k, &cert));
    }
}

#[test]
fn dichotomy_prefers_lowest_axis() {
    // Disjoint along both axes; axis 0 wins.
    let boxes: Vec<_> = (0..3).map(|i| BoxShape::from_ints(&[3 * i, 3 * i], &[3 * i + 1, 3 * i + 1]).unwrap()).collect();
    assert!(matches!(boxes_dichotomy(&boxes, 3).unwrap(), Dichotomy::Disjoint { axis: 0, .. }));
    // Disjoint only along axis 1.
    let boxes: Vec<_> = (0..3).map(|i| BoxShape::from_ints(&[0, 3 * i], &[1, 3 * i + 1]).unwrap()).collect();
    assert!(matches!(boxes_dichotomy(&boxes, 3).unwrap(), Dichotomy::Disjoint { axis: 1, .. }));
}

#[test]
fn hundred_random_planar_boxes_with_k_three_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let boxes = random_boxes(&mut rng, 100, 2);
    let cert = boxes_dichotomy(&boxes, 3).unwrap();
    assert!(verify_dichotomy(&boxes, 3, &cert));
    if let Dichotomy::Common { members, .. } = &cert {
        assert!(members.len() * 9 >= 100);
    }
}

#[test]
fn tampered_dichotomy_certificates_are_rejected() {
    let boxes: Vec<_> = (0..4).map(|i| BoxShape::from_ints(&[i], &[i + 1]).unwrap()).collect();
    assert!(!verify_dichotomy(&boxes, 2, &Dichotomy::Disjoint { axis: 0, members: vec![0, 1] }));
    assert!(!verify_dichotomy(&boxes, 2, &Dichotomy::Common { members: vec![0, 1], point: vec![qr(3, 2)] }));
    assert!(!verify_dichotomy(&boxes, 2, &Dichotomy::Common { members: vec![0], point: vec![Q::from_integer(0.into())] }));
}

#[test]
fn small_strong_products() {
    assert_eq!(strong_product(&Graph::path(2), &Graph::path(2)), Graph::complete(4));
    assert_eq!(strong_product(&Graph::star(1), &Graph::path(1)), Graph::complete(2));
    let g = strong_product(&Graph::star(3), &Graph::path(4));
    assert_eq!(g.n(), 16);
    // Center row is adjacent to everything in neighbouring columns.
    assert_eq!(g.degree(1), 4 * 3 - 1);
}

#[test]
fn single_vertex_products_add_dimensions() {
    let a = rep(vec![boxed(&[0, 0], &[1, 1])]);
    let b = rep(vec![boxed(&[3], &[5])]);
    let p = product_representation(&a, &b, ProductMode::Product).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p.dim(), 3);
    assert_eq!(p.realized()[0].as_box().unwrap(), &BoxShape::from_ints(&[0, 0, 3], &[1, 1, 5]).unwrap());
}

#[test]
fn conjunction_of_a_path_with_itself_keeps_the_graph() {
    let path = rep((0..6).map(|i| boxed(&[2 * i], &[2 * i + 3])).collect());
    let g = build_intersection_graph(&path).unwrap();
    let c = product_representation(&path, &path, ProductMode::Conjunction).unwrap();
    assert_eq!(c.dim(), 2);
    assert_eq!(build_intersection_graph(&c).unwrap(), g);
    assert!(product_representation(&path, &rep(vec![boxed(&[0], &[1])]), ProductMode::Conjunction).is_err());
}

#[test]
fn interval_times_triangle_is_a_prism() {
    let tri = ConvexPolytope::from_points(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let a = rep(vec![PlacedShape::at_origin(Shape::Polytope(tri))]);
    let b = rep(vec![boxed(&[0], &[2])]);
    let p = product_representation(&a, &b, ProductMode::Product).unwrap();
    let Shape::Polytope(prism) = &p.realized()[0] else { panic!() };
    assert_eq!(prism.vertices().len(), 6);
    assert!(product_representation(&p, &b, ProductMode::Product).is_err());
}

fn arb_boxes(d: usize) -> impl Strategy<Value = Vec<BoxShape>> {
    prop::collection::vec((prop::collection::vec(0i64..12, d), prop::collection::vec(1i64..5, d)), 1..10).prop_map(
        |v| v.into_iter().map(|(lo, ext)| {
            let hi: Vec<i64> = lo.iter().zip(&ext).map(|(l, e)| l + e).collect();
            BoxShape::from_ints(&lo, &hi).unwrap()
        })
        .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_graph_is_strong_product(a in arb_boxes(1), b in arb_boxes(2)) {
        let (ra, rb) = (box_rep(&a), box_rep(&b));
        let p = product_representation(&ra, &rb, ProductMode::Product).unwrap();
        let expect = strong_product(&build_intersection_graph(&ra).unwrap(), &build_intersection_graph(&rb).unwrap());
        prop_assert_eq!(build_intersection_graph(&p).unwrap(), expect);
        let (ta, tb, tp) = (thinness(&ra).unwrap().c, thinness(&rb).unwrap().c, thinness(&p).unwrap().c);
        prop_assert_eq!(tp, ta * tb);
    }

    #[test]
    fn conjunction_inherits_thinness_bound(a in arb_boxes(2)) {
        let shift: Vec<BoxShape> = a.iter().map(|b| b.translate(&[q(1)])).collect();
        let ra = box_rep(&a);
        let c = product_representation(&ra, &box_rep(&shift.iter().map(|b| {
            BoxShape::new(vec![b.lo()[0].clone()], vec![b.hi()[0].clone()]).unwrap()
        }).collect::<Vec<_>>()), ProductMode::Conjunction).unwrap();
        prop_assert!(thinness(&c).unwrap().c <= thinness(&ra).unwrap().c);
    }

    #[test]
    fn dichotomy_certificates_verify(boxes in arb_boxes(3), k in 1usize..5) {
        let cert = boxes_dichotomy(&boxes, k).unwrap();
        prop_assert!(verify_dichotomy(&boxes, k, &cert));
    }

    #[test]
    fn thinness_bounds_common_point_cliques(boxes in arb_boxes(2)) {
        let th = thinness(&box_rep(&boxes)).unwrap();
        if let Dichotomy::Common { members, .. } = boxes_dichotomy(&boxes, boxes.len() + 1).unwrap() {
            prop_assert!(th.c >= members.len());
        }
    }
}
