use num_traits::Zero;

use super::{cross, dot, norm, sub, ConvexPolytope, Point, Shape};
use crate::lp::max_margin;
use crate::num::{q_to_f64, Scalar, Q};

pub fn volume(b: &Shape) -> Scalar {
    match b {
        Shape::Box(b) => Scalar::Exact(b.volume()),
        Shape::Polytope(p) => Scalar::Float(polytope_volume(p)),
        Shape::Union(u) => Scalar::Exact(u.volume()),
    }
}

pub(crate) fn polytope_volume(p: &ConvexPolytope) -> f64 {
    let v = p.vertices();
    match p.dim() {
        1 => v[1][0] - v[0][0],
        2 => {
            let n = v.len();
            (0..n).map(|i| v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1]).sum::<f64>() / 2.0
        }
        _ => {
            let c = p.centroid_of_vertices();
            let mut total = 0.0;
            for face in p.faces() {
                let a = sub(&v[face[0]], &c);
                for w in 1..face.len() - 1 {
                    let b = sub(&v[face[w]], &c);
                    let d = sub(&v[face[w + 1]], &c);
                    total += dot(&a, &cross(&b, &d)) / 6.0;
                }
            }
            total
        }
    }
}

/// Width of the vertex set in unit direction `u`.
pub(crate) fn width_along(vertices: &[Point], u: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in vertices {
        let s = dot(v, u);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    hi - lo
}

/// Candidate directions containing the minimum-width direction: facet
/// normals, plus in 3D the normals of the Minkowski difference generated by
/// pairs of edges.
pub(crate) fn width_candidates(p: &ConvexPolytope) -> Vec<Point> {
    let mut dirs: Vec<Point> = p.facets().iter().map(|h| h.normal.clone()).collect();
    if p.dim() == 3 {
        let v = p.vertices();
        let edges: Vec<Point> = p.edges().iter().map(|&(a, b)| sub(&v[b], &v[a])).collect();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let c = cross(&edges[i], &edges[j]);
                let l = norm(&c);
                if l > 1e-12 * norm(&edges[i]) * norm(&edges[j]) {
                    dirs.push(c.iter().map(|x| x / l).collect());
                }
            }
        }
    }
    dirs
}

pub(crate) fn polytope_height(p: &ConvexPolytope) -> f64 {
    if p.dim() == 1 {
        return polytope_volume(p);
    }
    width_candidates(p).iter().map(|u| width_along(p.vertices(), u)).fold(f64::INFINITY, f64::min)
}

pub fn height(b: &Shape) -> Scalar {
    match b {
        Shape::Box(b) => Scalar::Exact(b.extents().into_iter().min().expect("dimension >= 1")),
        Shape::Polytope(p) => Scalar::Float(polytope_height(p)),
        Shape::Union(u) => {
            // The width of a set equals the width of its convex hull.
            let corners = union_corners(u.parts());
            match ConvexPolytope::from_points(u.dim(), corners) {
                Ok(h) => Scalar::Float(polytope_height(&h)),
                Err(_) => {
                    let (lo, hi) = b.bbox_f64();
                    Scalar::Float(lo.iter().zip(&hi).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min))
                }
            }
        }
    }
}

fn union_corners(parts: &[super::BoxShape]) -> Vec<Point> {
    let mut out = Vec::new();
    for b in parts {
        let d = b.dim();
        let (lo, hi) = (b.lo_f64(), b.hi_f64());
        for mask in 0..1usize << d.min(20) {
            out.push((0..d).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect());
        }
    }
    out
}

fn max_pairwise(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.max(norm(&sub(&points[i], &points[j])));
        }
    }
    best
}

pub fn diameter(b: &Shape) -> Scalar {
    match b {
        Shape::Box(b) => {
            let sq = b.extents().iter().fold(Q::zero(), |acc, e| acc + e * e);
            Scalar::Float(q_to_f64(&sq).sqrt())
        }
        Shape::Polytope(p) => Scalar::Float(max_pairwise(p.vertices())),
        Shape::Union(u) => Scalar::Float(max_pairwise(&union_corners(u.parts()))),
    }
}

/// Diameter of the largest inscribed ball: the minimum extent for boxes, the
/// Chebyshev center LP over the facet inequalities for polytopes.
pub fn inscribed_ball_bound(b: &Shape) -> Scalar {
    match b {
        Shape::Box(b) => Scalar::Exact(b.extents().into_iter().min().expect("dimension >= 1")),
        Shape::Polytope(p) => Scalar::Float(2.0 * chebyshev_radius(p)),
        Shape::Union(u) => Scalar::Exact(
            u.parts().iter().flat_map(|b| b.extents().into_iter().min()).max().expect("non-empty union"),
        ),
    }
}

pub(crate) fn chebyshev_radius(p: &ConvexPolytope) -> f64 {
    let rows: Vec<(Vec<f64>, f64)> = p.facets().iter().map(|h| (h.normal.clone(), h.offset)).collect();
    max_margin(p.dim(), &rows).map(|(r, _)| r.max(0.0)).unwrap_or(0.0)
}
