//! Convex shapes and their measures.
//!
//! Two backends live side by side. [`BoxShape`] stores exact rational
//! coordinates and every operation on it is exact. [`ConvexPolytope`] stores
//! `f64` vertices (dimension 1 to 3) together with its facet inequalities and
//! compares with the global tolerance [`EPS`](crate::num::EPS).

mod envelope;
mod hull;
mod measure;
mod predicates;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{q_to_f64, Q};

pub use envelope::{check_envelope_quality, envelope};
pub use measure::{diameter, height, inscribed_ball_bound, volume};
pub(crate) use measure::polytope_volume;
pub(crate) use predicates::{polytopes_intersect, sample_polytope, shapes_intersect};
pub use predicates::{
    check_translate_union_bound, contains_point, contains_shape, intersection_point, intersection_volume,
    intersects, minkowski_sum_scaled, polytope_intersection, UnionBoundCheck,
};

pub type Point = Vec<f64>;

/// Axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]` with `lo_i < hi_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxShape {
    lo: Vec<Q>,
    hi: Vec<Q>,
}

impl BoxShape {
    pub fn new(lo: Vec<Q>, hi: Vec<Q>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::Degenerate("box of dimension 0".into()));
        }
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] >= hi[i]) {
            return Err(Error::Degenerate(format!("box axis {i} has lo {} >= hi {}", lo[i], hi[i])));
        }
        Ok(BoxShape { lo, hi })
    }

    /// Box `[0, e_1] x ... x [0, e_d]`.
    pub fn from_extents(extents: &[Q]) -> Result<Self> {
        BoxShape::new(vec![Q::zero(); extents.len()], extents.to_vec())
    }

    /// Box from integer corner coordinates.
    pub fn from_ints(lo: &[i64], hi: &[i64]) -> Result<Self> {
        BoxShape::new(lo.iter().map(|&v| crate::num::q(v)).collect(), hi.iter().map(|&v| crate::num::q(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Q] {
        &self.lo
    }

    pub fn hi(&self) -> &[Q] {
        &self.hi
    }

    pub fn extent(&self, i: usize) -> Q {
        &self.hi[i] - &self.lo[i]
    }

    pub fn extents(&self) -> Vec<Q> {
        (0..self.dim()).map(|i| self.extent(i)).collect()
    }

    pub fn volume(&self) -> Q {
        (0..self.dim()).fold(Q::one(), |acc, i| acc * self.extent(i))
    }

    pub fn center(&self) -> Vec<Q> {
        let two = crate::num::q(2);
        self.lo.iter().zip(&self.hi).map(|(l, h)| (l + h) / &two).collect()
    }

    pub fn translate(&self, t: &[Q]) -> BoxShape {
        BoxShape {
            lo: self.lo.iter().zip(t).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(t).map(|(a, b)| a + b).collect(),
        }
    }

    /// `{k x : x in B}` for `k > 0`.
    pub fn scale(&self, k: &Q) -> BoxShape {
        BoxShape { lo: self.lo.iter().map(|v| v * k).collect(), hi: self.hi.iter().map(|v| v * k).collect() }
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= p[i] && p[i] <= self.hi[i])
    }

    pub fn contains_f64(&self, p: &[f64], eps: f64) -> bool {
        (0..self.dim()).all(|i| q_to_f64(&self.lo[i]) - eps <= p[i] && p[i] <= q_to_f64(&self.hi[i]) + eps)
    }

    /// Closed-set intersection test.
    pub fn intersects(&self, other: &BoxShape) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }

    /// Common box of two intersecting boxes, `None` if the overlap is empty
    /// or has zero measure along some axis.
    pub fn intersection(&self, other: &BoxShape) -> Option<BoxShape> {
        let lo: Vec<Q> = (0..self.dim()).map(|i| crate::num::q_max(&self.lo[i], &other.lo[i])).collect();
        let hi: Vec<Q> = (0..self.dim()).map(|i| crate::num::q_min(&self.hi[i], &other.hi[i])).collect();
        BoxShape::new(lo, hi).ok()
    }

    /// Product of the per-axis overlap lengths.
    pub fn overlap_volume(&self, other: &BoxShape) -> Q {
        let mut acc = Q::one();
        for i in 0..self.dim() {
            let len = crate::num::q_min(&self.hi[i], &other.hi[i]) - crate::num::q_max(&self.lo[i], &other.lo[i]);
            if !len.is_positive() {
                return Q::zero();
            }
            acc *= len;
        }
        acc
    }

    pub fn lo_f64(&self) -> Point {
        self.lo.iter().map(q_to_f64).collect()
    }

    pub fn hi_f64(&self) -> Point {
        self.hi.iter().map(q_to_f64).collect()
    }

    /// Cartesian product `self x other` in dimension `d1 + d2`.
    pub fn product(&self, other: &BoxShape) -> BoxShape {
        let mut lo = self.lo.clone();
        lo.extend(other.lo.iter().cloned());
        let mut hi = self.hi.clone();
        hi.extend(other.hi.iter().cloned());
        BoxShape { lo, hi }
    }

    pub fn to_polytope(&self) -> Result<ConvexPolytope> {
        let d = self.dim();
        if d > 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        let lo = self.lo_f64();
        let hi = self.hi_f64();
        let corners = (0..1usize << d)
            .map(|mask| (0..d).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect())
            .collect();
        ConvexPolytope::from_points(d, corners)
    }
}

/// Facet inequality `normal · x <= offset` with a unit outward normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    pub fn slack(&self, p: &[f64]) -> f64 {
        self.offset - dot(&self.normal, p)
    }
}

/// Convex polytope in dimension 1, 2 or 3, stored as the exact vertex set of
/// its hull together with its facets.
///
/// In dimension 2 the vertices are in counter-clockwise order. In dimension 3
/// every facet carries its incident vertices ordered counter-clockwise as seen
/// from outside.
#[derive(Clone, Debug)]
pub struct ConvexPolytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Halfspace>,
    faces: Vec<Vec<usize>>,
}

impl PartialEq for ConvexPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl ConvexPolytope {
    /// Convex hull of `points`, canonicalised to its vertex set.
    pub fn from_points(dim: usize, points: Vec<Point>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate("non-finite coordinate".into()));
        }
        hull::hull(dim, points)
    }

    pub(crate) fn from_parts(dim: usize, vertices: Vec<Point>, facets: Vec<Halfspace>, faces: Vec<Vec<usize>>) -> Self {
        ConvexPolytope { dim, vertices, facets, faces }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// Vertex indices of each facet (dimension 3), or of each edge (dimension 2).
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Undirected edges as vertex index pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.dim {
            1 => vec![(0, 1)],
            2 => (0..self.vertices.len()).map(|i| (i, (i + 1) % self.vertices.len())).collect(),
            _ => {
                let mut out: Vec<(usize, usize)> = self
                    .faces
                    .iter()
                    .flat_map(|f| (0..f.len()).map(move |i| (f[i].min(f[(i + 1) % f.len()]), f[i].max(f[(i + 1) % f.len()]))))
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }

    pub fn translate(&self, t: &[f64]) -> ConvexPolytope {
        ConvexPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| add(v, t)).collect(),
            facets: self
                .facets
                .iter()
                .map(|h| Halfspace { normal: h.normal.clone(), offset: h.offset + dot(&h.normal, t) })
                .collect(),
            faces: self.faces.clone(),
        }
    }

    /// `{k x : x in P}` for `k > 0`.
    pub fn scale(&self, k: f64) -> ConvexPolytope {
        ConvexPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.iter().map(|x| x * k).collect()).collect(),
            facets: self.facets.iter().map(|h| Halfspace { normal: h.normal.clone(), offset: h.offset * k }).collect(),
            faces: self.faces.clone(),
        }
    }

    /// Point reflection `-P`.
    pub fn negate(&self) -> ConvexPolytope {
        let pts = self.vertices.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        ConvexPolytope::from_points(self.dim, pts).expect("reflection of a valid polytope is valid")
    }

    pub fn contains(&self, p: &[f64], eps: f64) -> bool {
        self.facets.iter().all(|h| h.slack(p) >= -eps)
    }

    /// Largest signed slack; positive means strictly inside.
    pub fn depth(&self, p: &[f64]) -> f64 {
        self.facets.iter().map(|h| h.slack(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn centroid_of_vertices(&self) -> Point {
        let n = self.vertices.len() as f64;
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            for i in 0..self.dim {
                c[i] += v[i] / n;
            }
        }
        c
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox_of(&self.vertices, self.dim)
    }

    /// Coordinate scale used to make tolerances relative.
    pub fn scale_hint(&self) -> f64 {
        self.vertices.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()))
    }
}

/// Non-convex union of boxes; only used as a negative control.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxUnion {
    parts: Vec<BoxShape>,
}

impl BoxUnion {
    pub fn new(parts: Vec<BoxShape>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::Degenerate("empty box union".into()));
        };
        let d = first.dim();
        if let Some(p) = parts.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
        }
        Ok(BoxUnion { parts })
    }

    pub fn parts(&self) -> &[BoxShape] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts[0].dim()
    }

    pub fn translate(&self, t: &[Q]) -> BoxUnion {
        BoxUnion { parts: self.parts.iter().map(|b| b.translate(t)).collect() }
    }

    /// Exact measure of the union by coordinate compression.
    pub fn volume(&self) -> Q {
        let d = self.dim();
        let mut coords: Vec<Vec<Q>> = vec![Vec::new(); d];
        for b in &self.parts {
            for i in 0..d {
                coords[i].push(b.lo()[i].clone());
                coords[i].push(b.hi()[i].clone());
            }
        }
        for c in &mut coords {
            c.sort();
            c.dedup();
        }
        let mut total = Q::zero();
        let mut idx = vec![0usize; d];
        'cells: loop {
            let lo: Vec<Q> = (0..d).map(|i| coords[i][idx[i]].clone()).collect();
            let hi: Vec<Q> = (0..d).map(|i| coords[i][idx[i] + 1].clone()).collect();
            let mid: Vec<Q> = lo.iter().zip(&hi).map(|(a, b)| (a + b) / crate::num::q(2)).collect();
            if self.parts.iter().any(|b| b.contains(&mid)) {
                total += (0..d).fold(Q::one(), |acc, i| acc * (&hi[i] - &lo[i]));
            }
            for i in 0..d {
                idx[i] += 1;
                if idx[i] + 1 < coords[i].len() {
                    continue 'cells;
                }
                idx[i] = 0;
            }
            break;
        }
        total
    }
}

/// A shape in the geometric alphabet.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Box(BoxShape),
    Polytope(ConvexPolytope),
    /// Non-convex control shape; rejected by every convexity check.
    Union(BoxUnion),
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Box(b) => b.dim(),
            Shape::Polytope(p) => p.dim(),
            Shape::Union(u) => u.dim(),
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, Shape::Union(_))
    }

    pub fn as_box(&self) -> Option<&BoxShape> {
        match self {
            Shape::Box(b) => Some(b),
            _ => None,
        }
    }

    /// Float view of a convex shape.
    pub fn to_polytope(&self) -> Result<ConvexPolytope> {
        match self {
            Shape::Box(b) => b.to_polytope(),
            Shape::Polytope(p) => Ok(p.clone()),
            Shape::Union(_) => Err(Error::NonConvex("box union".into())),
        }
    }

    pub fn translate(&self, t: &[Q]) -> Result<Shape> {
        if t.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: t.len() });
        }
        Ok(match self {
            Shape::Box(b) => Shape::Box(b.translate(t)),
            Shape::Polytope(p) => Shape::Polytope(p.translate(&t.iter().map(q_to_f64).collect::<Vec<_>>())),
            Shape::Union(u) => Shape::Union(u.translate(t)),
        })
    }

    pub fn bbox_f64(&self) -> (Point, Point) {
        match self {
            Shape::Box(b) => (b.lo_f64(), b.hi_f64()),
            Shape::Polytope(p) => p.bbox(),
            Shape::Union(u) => {
                let d = u.dim();
                let mut lo = vec![f64::INFINITY; d];
                let mut hi = vec![f64::NEG_INFINITY; d];
                for b in u.parts() {
                    for i in 0..d {
                        lo[i] = lo[i].min(q_to_f64(&b.lo()[i]));
                        hi[i] = hi[i].max(q_to_f64(&b.hi()[i]));
                    }
                }
                (lo, hi)
            }
        }
    }

    pub fn contains_f64(&self, p: &[f64], eps: f64) -> bool {
        match self {
            Shape::Box(b) => b.contains_f64(p, eps),
            Shape::Polytope(poly) => poly.contains(p, eps),
            Shape::Union(u) => u.parts().iter().any(|b| b.contains_f64(p, eps)),
        }
    }
}

/// `{k x : x in B}`.
pub fn scale(shape: &Shape, k: &Q) -> Result<Shape> {
    if !k.is_positive() {
        return Err(Error::InvalidParameter(format!("scale factor must be positive, got {k}")));
    }
    Ok(match shape {
        Shape::Box(b) => Shape::Box(b.scale(k)),
        Shape::Polytope(p) => Shape::Polytope(p.scale(q_to_f64(k))),
        Shape::Union(u) => Shape::Union(BoxUnion { parts: u.parts().iter().map(|b| b.scale(k)).collect() }),
    })
}

/// A shape together with the translation placing it in space.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedShape {
    pub shape: Shape,
    pub translation: Vec<Q>,
}

impl PlacedShape {
    pub fn new(shape: Shape, translation: Vec<Q>) -> Result<Self> {
        if translation.len() != shape.dim() {
            return Err(Error::DimensionMismatch { expected: shape.dim(), got: translation.len() });
        }
        Ok(PlacedShape { shape, translation })
    }

    /// Shape placed at the origin.
    pub fn at_origin(shape: Shape) -> Self {
        let d = shape.dim();
        PlacedShape { shape, translation: vec![Q::zero(); d] }
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    /// The translated point set.
    pub fn realize(&self) -> Shape {
        self.shape.translate(&self.translation).expect("dimension checked on construction")
    }
}

/// `{center + sum_i alpha_i sides_i : -1 <= alpha_i <= 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parallelepiped {
    pub center: Point,
    pub sides: Vec<Point>,
}

impl Parallelepiped {
    pub fn new(center: Point, sides: Vec<Point>) -> Result<Self> {
        let d = center.len();
        if sides.len() != d || sides.iter().any(|s| s.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: sides.len() });
        }
        let p = Parallelepiped { center, sides };
        if p.det().abs() < 1e-300 {
            return Err(Error::Degenerate("parallelepiped sides are linearly dependent".into()));
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn side_matrix(&self) -> nalgebra::DMatrix<f64> {
        let d = self.dim();
        nalgebra::DMatrix::from_fn(d, d, |r, c| self.sides[c][r])
    }

    pub fn det(&self) -> f64 {
        self.side_matrix().determinant()
    }

    pub fn volume(&self) -> f64 {
        (1u64 << self.dim()) as f64 * self.det().abs()
    }

    /// Coordinates `alpha` with `p = center + sum alpha_i sides_i`.
    pub fn coordinates(&self, p: &[f64]) -> Point {
        let m = self.side_matrix();
        let rhs = nalgebra::DVector::from_iterator(self.dim(), p.iter().zip(&self.center).map(|(a, b)| a - b));
        let sol = m.lu().solve(&rhs).expect("non-singular by construction");
        sol.iter().copied().collect()
    }

    pub fn contains(&self, p: &[f64], eps: f64) -> bool {
        self.coordinates(p).iter().all(|a| a.abs() <= 1.0 + eps)
    }

    pub fn vertices(&self) -> Vec<Point> {
        let d = self.dim();
        (0..1usize << d)
            .map(|mask| {
                let mut v = self.center.clone();
                for (i, s) in self.sides.iter().enumerate() {
                    let sign = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                    for j in 0..d {
                        v[j] += sign * s[j];
                    }
                }
                v
            })
            .collect()
    }

    /// Scaling by `f` about the center.
    pub fn scale_about_center(&self, f: f64) -> Parallelepiped {
        Parallelepiped {
            center: self.center.clone(),
            sides: self.sides.iter().map(|s| s.iter().map(|x| x * f).collect()).collect(),
        }
    }

    /// Minimum width, `2 / |row_i(V^-1)|` over the rows of the inverse side matrix.
    pub fn height(&self) -> f64 {
        let inv = self.side_matrix().try_inverse().expect("non-singular by construction");
        (0..self.dim()).map(|i| 2.0 / inv.row(i).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn to_polytope(&self) -> Result<ConvexPolytope> {
        ConvexPolytope::from_points(self.dim(), self.vertices())
    }
}

/// Axis-aligned parallelepiped of a box, the box being its own envelope.
pub fn box_parallelepiped(b: &BoxShape) -> Parallelepiped {
    let d = b.dim();
    let center = b.center().iter().map(q_to_f64).collect();
    let sides = (0..d)
        .map(|i| {
            let mut s = vec![0.0; d];
            s[i] = q_to_f64(&b.extent(i)) / 2.0;
            s
        })
        .collect();
    Parallelepiped { center, sides }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn cross(a: &[f64], b: &[f64]) -> Point {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn bbox_of(points: &[Point], dim: usize) -> (Point, Point) {
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for i in 0..dim {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    (lo, hi)
}

pub(crate) fn bboxes_overlap(a: &(Point, Point), b: &(Point, Point), eps: f64) -> bool {
    (0..a.0.len()).all(|i| a.0[i] <= b.1[i] + eps && b.0[i] <= a.1[i] + eps)
}
