use nalgebra::{DMatrix, DVector};

use super::measure::{width_along, width_candidates};
use super::{box_parallelepiped, dot, norm, ConvexPolytope, Parallelepiped, Point, Shape};
use crate::error::{Error, Result};
use crate::lp::max_margin;
use crate::num::EPS;

/// Enclosing parallelepiped of (approximately) minimal volume.
///
/// Boxes are their own envelope. In the plane some optimal parallelogram has
/// one side of each parallel pair flush with an edge, so enumerating pairs of
/// edge normals is exact. In space, triples of facet normals seed a local
/// search over the three slab normals.
pub fn envelope(b: &Shape) -> Result<Parallelepiped> {
    let p = match b {
        Shape::Box(bx) => return Ok(box_parallelepiped(bx)),
        Shape::Polytope(p) => p.clone(),
        Shape::Union(_) => return Err(Error::NonConvex("envelope of a box union".into())),
    };
    match p.dim() {
        1 => {
            let (lo, hi) = (p.vertices()[0][0], p.vertices()[1][0]);
            Parallelepiped::new(vec![(lo + hi) / 2.0], vec![vec![(hi - lo) / 2.0]])
        }
        2 => envelope2(&p),
        _ => envelope3(&p),
    }
}

/// Volume of the slab intersection with the given unit normals, or infinity
/// when the normals are (nearly) dependent.
fn slab_volume(vertices: &[Point], normals: &[Point]) -> f64 {
    let d = normals.len();
    let det = DMatrix::from_fn(d, d, |r, c| normals[r][c]).determinant().abs();
    if det < 1e-9 {
        return f64::INFINITY;
    }
    normals.iter().map(|n| width_along(vertices, n)).product::<f64>() / det
}

fn slab_parallelepiped(vertices: &[Point], normals: &[Point]) -> Result<Parallelepiped> {
    let d = normals.len();
    let n = DMatrix::from_fn(d, d, |r, c| normals[r][c]);
    let inv = n.try_inverse().ok_or_else(|| Error::Degenerate("dependent slab normals".into()))?;
    let mut mids = Vec::with_capacity(d);
    let mut halves = Vec::with_capacity(d);
    for nk in normals {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in vertices {
            let s = dot(v, nk);
            lo = lo.min(s);
            hi = hi.max(s);
        }
        mids.push((lo + hi) / 2.0);
        halves.push((hi - lo) / 2.0);
    }
    let center = &inv * DVector::from_vec(mids);
    let sides = (0..d).map(|k| inv.column(k).iter().map(|x| x * halves[k]).collect()).collect();
    Parallelepiped::new(center.iter().copied().collect(), sides)
}

fn envelope2(p: &ConvexPolytope) -> Result<Parallelepiped> {
    let normals: Vec<Point> = p.facets().iter().map(|h| h.normal.clone()).collect();
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..normals.len() {
        for j in i + 1..normals.len() {
            let v = slab_volume(p.vertices(), &[normals[i].clone(), normals[j].clone()]);
            if v < best.0 {
                best = (v, i, j);
            }
        }
    }
    slab_parallelepiped(p.vertices(), &[normals[best.1].clone(), normals[best.2].clone()])
}

fn envelope3(p: &ConvexPolytope) -> Result<Parallelepiped> {
    let verts = p.vertices();
    let mut cands: Vec<Point> = p.facets().iter().map(|h| h.normal.clone()).collect();
    if cands.len() < 12 {
        cands = width_candidates(p);
    }
    let mut scored: Vec<(f64, [usize; 3])> = Vec::new();
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            for k in j + 1..cands.len() {
                let v = slab_volume(verts, &[cands[i].clone(), cands[j].clone(), cands[k].clone()]);
                if v.is_finite() {
                    scored.push((v, [i, j, k]));
                }
            }
        }
    }
    if scored.is_empty() {
        return Err(Error::Degenerate("no independent normal triple".into()));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<(f64, Vec<Point>)> = None;
    for (_, idx) in scored.iter().take(4) {
        let start: Vec<Point> = idx.iter().map(|&i| cands[i].clone()).collect();
        let (v, normals) = refine(verts, start);
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, normals));
        }
    }
    let (_, normals) = best.expect("at least one seed");
    slab_parallelepiped(verts, &normals)
}

/// Coordinate pattern search on the three slab normals.
fn refine(verts: &[Point], mut normals: Vec<Point>) -> (f64, Vec<Point>) {
    let mut cur = slab_volume(verts, &normals);
    let mut step = 0.1;
    while step > 1e-7 {
        let mut improved = false;
        for k in 0..normals.len() {
            for axis in 0..3 {
                for sign in [-1.0, 1.0] {
                    let mut trial = normals.clone();
                    trial[k][axis] += sign * step;
                    let l = norm(&trial[k]);
                    trial[k].iter_mut().for_each(|x| *x /= l);
                    let v = slab_volume(verts, &trial);
                    if v < cur * (1.0 - 1e-12) {
                        cur = v;
                        normals = trial;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (cur, normals)
}

/// Checks that `B ⊆ T` and that a translate of `(1/d)·T`, scaled about the
/// center of `T`, fits inside `B`.
pub fn check_envelope_quality(b: &Shape, t: &Parallelepiped) -> Result<bool> {
    let d = b.dim();
    if t.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: t.dim() });
    }
    let poly = match b {
        Shape::Union(_) => return Err(Error::NonConvex("box union".into())),
        _ => b.to_polytope()?,
    };
    let slack = 1e-7;
    if let Some(v) = poly.vertices().iter().find(|v| !t.contains(v, slack)) {
        return Err(Error::Precondition(format!("shape vertex {v:?} lies outside the parallelepiped")));
    }
    let small = t.scale_about_center(1.0 / d as f64);
    if let Shape::Box(bx) = b {
        let (lo, hi) = (bx.lo_f64(), bx.hi_f64());
        let fits = (0..d).all(|i| {
            let ext = 2.0 * small.sides.iter().map(|s| s[i].abs()).sum::<f64>();
            ext <= hi[i] - lo[i] + EPS * (hi[i] - lo[i]).max(1.0)
        });
        return Ok(fits);
    }
    let mut rows = Vec::new();
    for w in small.vertices() {
        for h in poly.facets() {
            rows.push((h.normal.clone(), h.offset - dot(&h.normal, &w)));
        }
    }
    let (margin, _) = max_margin(d, &rows)?;
    Ok(margin >= -EPS * poly.scale_hint())
}
