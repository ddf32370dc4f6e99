use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::measure::polytope_volume;
use super::{add, bboxes_overlap, sub, BoxShape, ConvexPolytope, Halfspace, PlacedShape, Point, Shape};
use crate::error::{Error, Result};
use crate::lp::max_margin_within;
use crate::num::{q, Q, Scalar, EPS};

fn same_dim(a: &PlacedShape, b: &PlacedShape) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// Closed-set intersection test.
pub fn intersects(a: &PlacedShape, b: &PlacedShape) -> Result<bool> {
    same_dim(a, b)?;
    shapes_intersect(&a.realize(), &b.realize())
}

pub(crate) fn shapes_intersect(a: &Shape, b: &Shape) -> Result<bool> {
    match (a, b) {
        (Shape::Box(x), Shape::Box(y)) => Ok(x.intersects(y)),
        (Shape::Union(u), other) | (other, Shape::Union(u)) => {
            for part in u.parts() {
                if shapes_intersect(&Shape::Box(part.clone()), other)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => {
            let (pa, pb) = (a.to_polytope()?, b.to_polytope()?);
            Ok(polytopes_intersect(&pa, &pb)?.is_some())
        }
    }
}

/// A common point of two polytopes, if the max-margin LP says they meet.
pub(crate) fn polytopes_intersect(a: &ConvexPolytope, b: &ConvexPolytope) -> Result<Option<Point>> {
    let eps = EPS * a.scale_hint().max(b.scale_hint());
    if !bboxes_overlap(&a.bbox(), &b.bbox(), eps) {
        return Ok(None);
    }
    let rows: Vec<(Vec<f64>, f64)> =
        a.facets().iter().chain(b.facets()).map(|h| (h.normal.clone(), h.offset)).collect();
    let (alo, ahi) = a.bbox();
    let (blo, bhi) = b.bbox();
    let lo: Vec<f64> = alo.iter().zip(&blo).map(|(x, y)| x.max(*y) - eps).collect();
    let hi: Vec<f64> = ahi.iter().zip(&bhi).map(|(x, y)| x.min(*y) + eps).collect();
    let (margin, x) = max_margin_within(a.dim(), &rows, &lo, &hi)?;
    Ok((margin >= -eps).then_some(x))
}

/// A point common to both shapes (deepest point for polytopes, a corner of
/// the overlap for boxes).
pub fn intersection_point(a: &PlacedShape, b: &PlacedShape) -> Result<Option<Point>> {
    same_dim(a, b)?;
    let (ra, rb) = (a.realize(), b.realize());
    if let (Shape::Box(x), Shape::Box(y)) = (&ra, &rb) {
        if !x.intersects(y) {
            return Ok(None);
        }
        return Ok(Some(
            (0..x.dim()).map(|i| crate::num::q_to_f64(&crate::num::q_max(&x.lo()[i], &y.lo()[i]))).collect(),
        ));
    }
    polytopes_intersect(&ra.to_polytope()?, &rb.to_polytope()?)
}

/// Intersection of two polytopes as a polytope, `None` if it has no volume.
pub fn polytope_intersection(a: &ConvexPolytope, b: &ConvexPolytope) -> Option<ConvexPolytope> {
    let eps = EPS * a.scale_hint().max(b.scale_hint());
    if !bboxes_overlap(&a.bbox(), &b.bbox(), eps) {
        return None;
    }
    let pts = match a.dim() {
        1 => {
            let lo = a.vertices()[0][0].max(b.vertices()[0][0]);
            let hi = a.vertices()[1][0].min(b.vertices()[1][0]);
            vec![vec![lo], vec![hi]]
        }
        2 => clip_polygon(a.vertices().to_vec(), b.facets()),
        _ => {
            let mut pts: Vec<Point> = Vec::new();
            for (p, q) in [(a, b), (b, a)] {
                pts.extend(p.vertices().iter().filter(|v| q.contains(v, eps)).cloned());
                let verts = p.vertices();
                for (i, j) in p.edges() {
                    let (u, v) = (&verts[i], &verts[j]);
                    for h in q.facets() {
                        let (su, sv) = (h.slack(u), h.slack(v));
                        if (su < 0.0) != (sv < 0.0) {
                            let t = su / (su - sv);
                            let x = add(u, &sub(v, u).iter().map(|c| c * t).collect::<Vec<_>>());
                            if q.contains(&x, eps) && p.contains(&x, eps) {
                                pts.push(x);
                            }
                        }
                    }
                }
            }
            pts
        }
    };
    ConvexPolytope::from_points(a.dim(), pts).ok()
}

/// Sutherland–Hodgman clipping of a convex polygon by halfspaces.
fn clip_polygon(mut poly: Vec<Point>, halfspaces: &[Halfspace]) -> Vec<Point> {
    for h in halfspaces {
        if poly.is_empty() {
            break;
        }
        let mut out = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let cur = &poly[i];
            let nxt = &poly[(i + 1) % poly.len()];
            let (sc, sn) = (h.slack(cur), h.slack(nxt));
            if sc >= 0.0 {
                out.push(cur.clone());
            }
            if (sc >= 0.0) != (sn >= 0.0) {
                let t = sc / (sc - sn);
                out.push(add(cur, &sub(nxt, cur).iter().map(|c| c * t).collect::<Vec<_>>()));
            }
        }
        poly = out;
    }
    poly
}

pub fn intersection_volume(a: &PlacedShape, b: &PlacedShape) -> Result<Scalar> {
    same_dim(a, b)?;
    let (ra, rb) = (a.realize(), b.realize());
    match (&ra, &rb) {
        (Shape::Box(x), Shape::Box(y)) => Ok(Scalar::Exact(x.overlap_volume(y))),
        (Shape::Union(_), _) | (_, Shape::Union(_)) => {
            Err(Error::NonConvex("intersection volume of a box union".into()))
        }
        _ => {
            let (pa, pb) = (ra.to_polytope()?, rb.to_polytope()?);
            Ok(Scalar::Float(polytope_intersection(&pa, &pb).map_or(0.0, |p| polytope_volume(&p))))
        }
    }
}

pub fn contains_point(shape: &Shape, p: &[f64]) -> bool {
    let eps = match shape {
        Shape::Polytope(poly) => EPS * poly.scale_hint(),
        _ => EPS,
    };
    shape.contains_f64(p, eps)
}

/// Whether `inner ⊆ outer`. Exact for two boxes.
pub fn contains_shape(outer: &Shape, inner: &Shape) -> Result<bool> {
    match (outer, inner) {
        (Shape::Box(o), Shape::Box(i)) => {
            Ok((0..o.dim()).all(|k| o.lo()[k] <= i.lo()[k] && i.hi()[k] <= o.hi()[k]))
        }
        (Shape::Union(_), _) => Err(Error::NonConvex("containment in a box union".into())),
        _ => {
            let o = outer.to_polytope()?;
            let i = inner.to_polytope()?;
            let eps = EPS * o.scale_hint().max(i.scale_hint());
            Ok(i.vertices().iter().all(|v| o.contains(v, eps)))
        }
    }
}

/// Minkowski sum `a + k·b` of two convex shapes.
pub fn minkowski_sum_scaled(a: &Shape, b: &Shape, k: &Q) -> Result<Shape> {
    match (a, b) {
        (Shape::Box(x), Shape::Box(y)) => {
            let lo = (0..x.dim()).map(|i| &x.lo()[i] + k * &y.lo()[i]).collect();
            let hi = (0..x.dim()).map(|i| &x.hi()[i] + k * &y.hi()[i]).collect();
            Ok(Shape::Box(BoxShape::new(lo, hi)?))
        }
        _ => {
            let (pa, pb) = (a.to_polytope()?, b.to_polytope()?);
            let kf = crate::num::q_to_f64(k);
            let mut pts = Vec::new();
            for u in pa.vertices() {
                for v in pb.vertices() {
                    pts.push(u.iter().zip(v).map(|(s, t)| s + kf * t).collect());
                }
            }
            Ok(Shape::Polytope(ConvexPolytope::from_points(a.dim(), pts)?))
        }
    }
}

/// Outcome of a sampled check that every translate of `B` meeting `A` lies
/// in `A + 2B`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnionBoundCheck {
    pub holds: bool,
    pub samples: usize,
    /// A sampled point outside `A + 2B`, when one was found.
    pub witness: Option<Point>,
}

fn is_centrally_symmetric(b: &Shape) -> Result<bool> {
    match b {
        Shape::Box(x) => Ok((0..x.dim()).all(|i| x.lo()[i] == -x.hi()[i].clone())),
        Shape::Polytope(p) => {
            let eps = 1e-7 * p.scale_hint();
            Ok(p.vertices().iter().all(|v| {
                p.vertices().iter().any(|w| v.iter().zip(w).all(|(a, b)| (a + b).abs() <= eps))
            }))
        }
        Shape::Union(_) => Err(Error::NonConvex("box union".into())),
    }
}

/// Samples `trials` translates `B'` of `B` with `B' ∩ A ≠ ∅` and checks that
/// sampled points of `B'` lie in `A + 2B`. Requires `B = -B`.
pub fn check_translate_union_bound(a: &Shape, b: &Shape, trials: usize, seed: u64) -> Result<UnionBoundCheck> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    if !a.is_convex() {
        return Err(Error::NonConvex("first shape is a box union".into()));
    }
    if !is_centrally_symmetric(b)? {
        return Err(Error::Precondition("second shape is not centrally symmetric (B != -B)".into()));
    }
    let sum = minkowski_sum_scaled(a, b, &q(2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points_per_trial = 8;
    let mut samples = 0;
    if let (Shape::Box(ba), Shape::Box(bb), Shape::Box(bs)) = (a, b, &sum) {
        const GRID: i64 = 1024;
        let pick = |rng: &mut ChaCha8Rng, bx: &BoxShape, corner: Option<bool>| -> Vec<Q> {
            (0..bx.dim())
                .map(|i| {
                    let r = match corner {
                        Some(_) => {
                            if rng.random_bool(0.5) {
                                GRID
                            } else {
                                0
                            }
                        }
                        None => rng.random_range(0..=GRID),
                    };
                    &bx.lo()[i] + bx.extent(i) * Q::new(r.into(), GRID.into())
                })
                .collect()
        };
        for trial in 0..trials {
            let corner = (trial % 4 == 0).then_some(true);
            let pa = pick(&mut rng, ba, corner);
            let pb = pick(&mut rng, bb, corner);
            let t: Vec<Q> = pa.iter().zip(&pb).map(|(x, y)| x - y).collect();
            let moved = bb.translate(&t);
            for j in 0..points_per_trial {
                let x = pick(&mut rng, &moved, (j == 0).then_some(true));
                samples += 1;
                if !bs.contains(&x) {
                    let w = x.iter().map(crate::num::q_to_f64).collect();
                    return Ok(UnionBoundCheck { holds: false, samples, witness: Some(w) });
                }
            }
        }
        return Ok(UnionBoundCheck { holds: true, samples, witness: None });
    }
    let (pa, pb) = (a.to_polytope()?, b.to_polytope()?);
    let Shape::Polytope(ps) = sum else {
        unreachable!("mixed shapes produce a polytope sum")
    };
    let eps = 1e-7 * ps.scale_hint();
    for trial in 0..trials {
        let corner = trial % 4 == 0;
        let x_a = sample_polytope(&mut rng, &pa, corner);
        let x_b = sample_polytope(&mut rng, &pb, corner);
        let t = sub(&x_a, &x_b);
        for j in 0..points_per_trial {
            let x = add(&sample_polytope(&mut rng, &pb, j == 0), &t);
            samples += 1;
            if !ps.contains(&x, eps) {
                return Ok(UnionBoundCheck { holds: false, samples, witness: Some(x) });
            }
        }
    }
    Ok(UnionBoundCheck { holds: true, samples, witness: None })
}

/// A random point of `p`: a vertex when `vertex` is set, otherwise a random
/// convex combination of the vertices.
pub(crate) fn sample_polytope(rng: &mut ChaCha8Rng, p: &ConvexPolytope, vertex: bool) -> Point {
    let verts = p.vertices();
    if vertex {
        return verts[rng.random_range(0..verts.len())].clone();
    }
    let weights: Vec<f64> = verts.iter().map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let mut x = vec![0.0; p.dim()];
    for (v, w) in verts.iter().zip(&weights) {
        for i in 0..x.len() {
            x[i] += v[i] * w / total;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qr;

    fn placed_box(lo: &[Q], hi: &[Q]) -> PlacedShape {
        PlacedShape::at_origin(Shape::Box(BoxShape::new(lo.to_vec(), hi.to_vec()).unwrap()))
    }

    fn disk(cx: f64) -> PlacedShape {
        let pts = (0..32)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / 32.0;
                vec![cx + a.cos(), a.sin()]
            })
            .collect();
        PlacedShape::at_origin(Shape::Polytope(ConvexPolytope::from_points(2, pts).unwrap()))
    }

    #[test]
    fn touching_boxes_intersect() {
        let a = placed_box(&[q(0), q(0)], &[q(1), q(1)]);
        let b = placed_box(&[q(1), q(1)], &[q(2), q(2)]);
        let c = placed_box(&[qr(3, 2), qr(3, 2)], &[q(2), q(2)]);
        assert!(intersects(&a, &b).unwrap());
        assert!(!intersects(&a, &c).unwrap());
    }

    #[test]
    fn nearby_disks_intersect() {
        assert!(intersects(&disk(0.0), &disk(1.99)).unwrap());
        assert!(!intersects(&disk(0.0), &disk(2.1)).unwrap());
    }

    #[test]
    fn box_overlap_volume() {
        let a = placed_box(&[q(0), q(0)], &[q(2), q(2)]);
        let b = placed_box(&[q(1), q(1)], &[q(3), q(3)]);
        let c = placed_box(&[q(5), q(5)], &[q(6), q(6)]);
        assert_eq!(intersection_volume(&a, &b).unwrap(), Scalar::Exact(q(1)));
        assert_eq!(intersection_volume(&a, &c).unwrap(), Scalar::Exact(q(0)));
    }

    #[test]
    fn polytope_overlap_matches_box_overlap() {
        let a = BoxShape::from_ints(&[0, 0, 0], &[2, 2, 2]).unwrap().to_polytope().unwrap();
        let b = BoxShape::from_ints(&[1, 1, 1], &[3, 4, 3]).unwrap().to_polytope().unwrap();
        let v = polytope_volume(&polytope_intersection(&a, &b).unwrap());
        assert!((v - 1.0).abs() < 1e-9);
        let a2 = BoxShape::from_ints(&[0, 0], &[2, 2]).unwrap().to_polytope().unwrap();
        let b2 = BoxShape::from_ints(&[1, -1], &[3, 1]).unwrap().to_polytope().unwrap();
        assert!((polytope_volume(&polytope_intersection(&a2, &b2).unwrap()) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn union_bound_holds_for_symmetric_box() {
        let a = Shape::Box(BoxShape::from_ints(&[0, 0], &[1, 1]).unwrap());
        let b = Shape::Box(BoxShape::from_ints(&[-1, -1], &[1, 1]).unwrap());
        let r = check_translate_union_bound(&a, &b, 1000, 7).unwrap();
        assert!(r.holds && r.witness.is_none());
    }

    #[test]
    fn union_bound_is_tight_at_corners_for_point_like_box() {
        let a = Shape::Box(BoxShape::new(vec![q(0), q(0)], vec![qr(1, 1000), qr(1, 1000)]).unwrap());
        let b = Shape::Box(BoxShape::from_ints(&[-1, -1], &[1, 1]).unwrap());
        assert!(check_translate_union_bound(&a, &b, 1000, 3).unwrap().holds);
        // The corner-touching translate reaches the far corner of A + 2B.
        let sum = minkowski_sum_scaled(&a, &b, &q(2)).unwrap();
        let moved = b.translate(&[q(-1), q(-1)]).unwrap();
        let Shape::Box(m) = moved else { unreachable!() };
        let Shape::Box(s) = sum else { unreachable!() };
        assert_eq!(m.lo(), s.lo());
    }

    #[test]
    fn union_bound_requires_symmetry() {
        let a = Shape::Box(BoxShape::from_ints(&[0, 0], &[1, 1]).unwrap());
        assert!(matches!(check_translate_union_bound(&a, &a, 10, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn union_bound_for_polytopes() {
        let hex: Vec<Point> = (0..6)
            .map(|i| {
                let t = std::f64::consts::PI * i as f64 / 3.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let b = Shape::Polytope(ConvexPolytope::from_points(2, hex).unwrap());
        let a = Shape::Polytope(
            ConvexPolytope::from_points(2, vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap(),
        );
        assert!(check_translate_union_bound(&a, &b, 500, 11).unwrap().holds);
    }
}
