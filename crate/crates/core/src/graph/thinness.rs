use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CertStatus, Representation};
use crate::error::Result;
use crate::geometry::{bboxes_overlap, polytopes_intersect, sample_polytope, BoxShape, ConvexPolytope, Point, Shape};
use crate::num::{q_to_f64, Q, EPS};

/// Largest number of shapes sharing a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thinness {
    pub c: usize,
    pub status: CertStatus,
    /// A point attaining `c`.
    pub witness: Option<Point>,
    /// The vertices whose shapes contain the witness.
    pub members: Vec<usize>,
}

/// Exact maximum depth for box representations, sampled otherwise.
pub fn thinness(r: &Representation) -> Result<Thinness> {
    let shapes = r.realized();
    if r.all_boxes() {
        let boxes: Vec<BoxShape> = shapes.iter().map(|s| s.as_box().expect("all boxes").clone()).collect();
        return Ok(box_thinness(&boxes));
    }
    sampled_thinness(&shapes, 8, 0x7417)
}

struct Compressed {
    coords: Vec<Vec<Q>>,
    ranks: Vec<Vec<(usize, usize)>>,
}

fn compress(boxes: &[BoxShape]) -> Compressed {
    let d = boxes[0].dim();
    let mut coords = Vec::with_capacity(d);
    let mut ranks = vec![vec![(0, 0); d]; boxes.len()];
    for axis in 0..d {
        let mut c: Vec<Q> = boxes.iter().flat_map(|b| [b.lo()[axis].clone(), b.hi()[axis].clone()]).collect();
        c.sort();
        c.dedup();
        for (i, b) in boxes.iter().enumerate() {
            ranks[i][axis] = (c.binary_search(&b.lo()[axis]).unwrap(), c.binary_search(&b.hi()[axis]).unwrap());
        }
        coords.push(c);
    }
    Compressed { coords, ranks }
}

/// Deepest point among `ids` on axes `axis..d`. Some deepest point has every
/// coordinate equal to a low end, so only those are swept.
fn deepest(ranks: &[Vec<(usize, usize)>], ids: &[usize], axis: usize, d: usize) -> (usize, Vec<usize>) {
    let mut sorted: Vec<usize> = ids.to_vec();
    sorted.sort_by_key(|&i| ranks[i][axis].0);
    let mut best = (0, Vec::new());
    let mut active: Vec<usize> = Vec::new();
    let mut next = 0;
    while next < sorted.len() {
        let x = ranks[sorted[next]][axis].0;
        while next < sorted.len() && ranks[sorted[next]][axis].0 == x {
            active.push(sorted[next]);
            next += 1;
        }
        active.retain(|&i| ranks[i][axis].1 >= x);
        if active.len() <= best.0 {
            continue;
        }
        if axis + 1 == d {
            best = (active.len(), vec![x]);
        } else {
            let (c, mut rest) = deepest(ranks, &active, axis + 1, d);
            if c > best.0 {
                rest.insert(0, x);
                best = (c, rest);
            }
        }
    }
    best
}

fn box_thinness(boxes: &[BoxShape]) -> Thinness {
    let d = boxes[0].dim();
    let comp = compress(boxes);
    let ids: Vec<usize> = (0..boxes.len()).collect();
    let (c, point_ranks) = deepest(&comp.ranks, &ids, 0, d);
    let point: Vec<Q> = point_ranks.iter().enumerate().map(|(a, &r)| comp.coords[a][r].clone()).collect();
    let members = (0..boxes.len()).filter(|&i| boxes[i].contains(&point)).collect();
    Thinness { c, status: CertStatus::Exact, witness: Some(point.iter().map(q_to_f64).collect()), members }
}

/// Depth over every combination of low-end coordinates; reference oracle for
/// the box sweep.
pub fn thinness_brute_force(boxes: &[BoxShape]) -> usize {
    let d = boxes[0].dim();
    let lows: Vec<Vec<Q>> = (0..d)
        .map(|a| {
            let mut v: Vec<Q> = boxes.iter().map(|b| b.lo()[a].clone()).collect();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    let mut best = 0;
    let mut idx = vec![0usize; d];
    loop {
        let p: Vec<Q> = (0..d).map(|a| lows[a][idx[a]].clone()).collect();
        best = best.max(boxes.iter().filter(|b| b.contains(&p)).count());
        let mut a = 0;
        while a < d {
            idx[a] += 1;
            if idx[a] < lows[a].len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == d {
            break;
        }
    }
    best
}

fn edge_crossings(a: &ConvexPolytope, b: &ConvexPolytope) -> Vec<Point> {
    let mut out = Vec::new();
    let (va, vb) = (a.vertices(), b.vertices());
    for (i, j) in a.edges() {
        for (k, l) in b.edges() {
            let (p, r) = (&va[i], [va[j][0] - va[i][0], va[j][1] - va[i][1]]);
            let (q, s) = (&vb[k], [vb[l][0] - vb[k][0], vb[l][1] - vb[k][1]]);
            let den = r[0] * s[1] - r[1] * s[0];
            if den.abs() < 1e-15 {
                continue;
            }
            let qp = [q[0] - p[0], q[1] - p[1]];
            let t = (qp[0] * s[1] - qp[1] * s[0]) / den;
            let u = (qp[0] * r[1] - qp[1] * r[0]) / den;
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
                out.push(vec![p[0] + t * r[0], p[1] + t * r[1]]);
            }
        }
    }
    out
}

/// Depth at candidate points: all vertices, common points of intersecting
/// pairs (plus edge crossings in the plane) and random points of each shape.
fn sampled_thinness(shapes: &[Shape], samples_per_shape: usize, seed: u64) -> Result<Thinness> {
    let n = shapes.len();
    let polys: Vec<ConvexPolytope> = shapes
        .iter()
        .map(|s| match s {
            Shape::Union(u) => {
                // Corners of the parts stand in for the union's vertices.
                let hull: Vec<Point> = u.parts().iter().flat_map(|b| b.to_polytope().map(|p| p.vertices().to_vec()).unwrap_or_default()).collect();
                ConvexPolytope::from_points(u.dim(), hull)
            }
            other => other.to_polytope(),
        })
        .collect::<Result<_>>()?;
    let bbs: Vec<_> = shapes.iter().map(Shape::bbox_f64).collect();
    let scale = polys.iter().map(ConvexPolytope::scale_hint).fold(1.0, f64::max);
    let eps = EPS * scale;
    let mut cands: Vec<Point> = polys.iter().flat_map(|p| p.vertices().iter().cloned()).collect();
    for s in shapes {
        if let Shape::Union(u) = s {
            for b in u.parts() {
                cands.extend(b.to_polytope()?.vertices().iter().cloned());
            }
        }
    }
    let pair_points: Vec<Vec<Point>> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<Point>> {
            let mut out = Vec::new();
            for j in i + 1..n {
                if !bboxes_overlap(&bbs[i], &bbs[j], eps) {
                    continue;
                }
                if let Some(x) = polytopes_intersect(&polys[i], &polys[j])? {
                    out.push(x);
                    if polys[i].dim() == 2 {
                        out.extend(edge_crossings(&polys[i], &polys[j]));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    cands.extend(pair_points.into_iter().flatten());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in &polys {
        for _ in 0..samples_per_shape {
            cands.push(sample_polytope(&mut rng, p, false));
        }
    }
    let depth = |x: &Point| -> Vec<usize> {
        (0..n)
            .filter(|&i| {
                bbs[i].0.iter().zip(&bbs[i].1).zip(x).all(|((l, h), v)| *l - eps <= *v && *v <= *h + eps)
                    && shapes[i].contains_f64(x, eps)
            })
            .collect()
    };
    let best = cands
        .par_iter()
        .map(|x| (depth(x).len(), x))
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .map(|(c, x)| (c, x.clone()));
    let (c, witness) = best.unwrap_or((0, vec![]));
    let members = depth(&witness);
    Ok(Thinness { c, status: CertStatus::SampledOnly, witness: Some(witness), members })
}
