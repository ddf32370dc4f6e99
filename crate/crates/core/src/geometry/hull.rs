//! Convex hulls in dimensions 1, 2 and 3.
//!
//! The 3D hull is a brute-force plane enumeration. Inputs here are at most a
//! few hundred points, and brute force is easy to make robust.

use super::{cross, dot, norm, sub, ConvexPolytope, Halfspace, Point};
use crate::error::{Error, Result};
use crate::num::EPS;

pub(super) fn hull(dim: usize, points: Vec<Point>) -> Result<ConvexPolytope> {
    let scale = points.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = EPS * scale;
    match dim {
        1 => hull1(points, tol),
        2 => hull2(points, tol),
        _ => hull3(points, tol, scale),
    }
}

fn hull1(points: Vec<Point>, tol: f64) -> Result<ConvexPolytope> {
    let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo > tol) {
        return Err(Error::Degenerate("1D polytope has zero length".into()));
    }
    let facets = vec![Halfspace { normal: vec![-1.0], offset: -lo }, Halfspace { normal: vec![1.0], offset: hi }];
    Ok(ConvexPolytope::from_parts(1, vec![vec![lo], vec![hi]], facets, vec![vec![0], vec![1]]))
}

fn turn(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; collinear boundary points are dropped.
fn hull2(mut pts: Vec<Point>, tol: f64) -> Result<ConvexPolytope> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol);
    if pts.len() < 3 {
        return Err(Error::Degenerate("fewer than 3 distinct points in the plane".into()));
    }
    let area_tol = tol * tol.max(EPS);
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= area_tol {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= area_tol {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let verts = lower;
    if verts.len() < 3 {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let n = verts.len();
    let mut facets = Vec::with_capacity(n);
    let mut faces = Vec::with_capacity(n);
    for i in 0..n {
        let a = &verts[i];
        let b = &verts[(i + 1) % n];
        let e = sub(b, a);
        let len = norm(&e);
        let normal = vec![e[1] / len, -e[0] / len];
        let offset = dot(&normal, a);
        facets.push(Halfspace { normal, offset });
        faces.push(vec![i, (i + 1) % n]);
    }
    Ok(ConvexPolytope::from_parts(2, verts, facets, faces))
}

fn hull3(raw: Vec<Point>, tol: f64, scale: f64) -> Result<ConvexPolytope> {
    let mut pts: Vec<Point> = Vec::with_capacity(raw.len());
    for p in raw {
        if !pts.iter().any(|q| norm(&sub(q, &p)) <= tol) {
            pts.push(p);
        }
    }
    let n = pts.len();
    if n < 4 {
        return Err(Error::Degenerate("fewer than 4 distinct points in space".into()));
    }
    let area_floor = 1e-12 * scale * scale;
    let mut planes: Vec<Halfspace> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let ab = sub(&pts[j], &pts[i]);
            for k in j + 1..n {
                let c = cross(&ab, &sub(&pts[k], &pts[i]));
                let len = norm(&c);
                if len <= area_floor {
                    continue;
                }
                let normal: Point = c.iter().map(|v| v / len).collect();
                let off = dot(&normal, &pts[i]);
                let mut above = false;
                let mut below = false;
                for p in &pts {
                    let s = dot(&normal, p) - off;
                    above |= s > tol;
                    below |= s < -tol;
                    if above && below {
                        break;
                    }
                }
                let h = match (above, below) {
                    (false, _) => Halfspace { normal, offset: off },
                    (true, false) => Halfspace { normal: normal.iter().map(|v| -v).collect(), offset: -off },
                    (true, true) => continue,
                };
                let dup = planes
                    .iter()
                    .any(|g| norm(&sub(&g.normal, &h.normal)) < 1e-7 && (g.offset - h.offset).abs() < 10.0 * tol);
                if !dup {
                    planes.push(h);
                }
            }
        }
    }
    if planes.is_empty() {
        return Err(Error::Degenerate("points are coplanar".into()));
    }
    // A supporting plane with points on one side always exists; full dimension
    // needs at least one point strictly off it.
    let first = &planes[0];
    if pts.iter().all(|p| first.slack(p).abs() <= tol) {
        return Err(Error::Degenerate("points are coplanar".into()));
    }

    let on = |h: &Halfspace, p: &[f64]| h.slack(p).abs() <= 10.0 * tol;
    let mut keep: Vec<usize> = Vec::new();
    for (idx, p) in pts.iter().enumerate() {
        let incident: Vec<&Halfspace> = planes.iter().filter(|h| on(h, p)).collect();
        if rank3(&incident) {
            keep.push(idx);
        }
    }
    let verts: Vec<Point> = keep.iter().map(|&i| pts[i].clone()).collect();

    let mut facets = Vec::new();
    let mut faces = Vec::new();
    for h in planes {
        let mut face: Vec<usize> = (0..verts.len()).filter(|&v| on(&h, &verts[v])).collect();
        if face.len() < 3 {
            continue;
        }
        let m = face.len() as f64;
        let c: Point = (0..3).map(|a| face.iter().map(|&v| verts[v][a]).sum::<f64>() / m).collect();
        let u0 = sub(&verts[face[0]], &c);
        let u: Point = u0.iter().map(|v| v / norm(&u0)).collect();
        let w = cross(&h.normal, &u);
        face.sort_by(|&a, &b| {
            let da = sub(&verts[a], &c);
            let db = sub(&verts[b], &c);
            let ta = dot(&da, &w).atan2(dot(&da, &u));
            let tb = dot(&db, &w).atan2(dot(&db, &u));
            ta.partial_cmp(&tb).expect("finite angles")
        });
        facets.push(h);
        faces.push(face);
    }
    Ok(ConvexPolytope::from_parts(3, verts, facets, faces))
}

fn rank3(normals: &[&Halfspace]) -> bool {
    for a in 0..normals.len() {
        for b in a + 1..normals.len() {
            let c = cross(&normals[a].normal, &normals[b].normal);
            for n in &normals[b + 1..] {
                if dot(&c, &n.normal).abs() > 1e-9 {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::ConvexPolytope;

    #[test]
    fn square_with_interior_and_collinear_points() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
            vec![0.5, 0.0],
            vec![1.0, 1.0],
        ];
        let p = ConvexPolytope::from_points(2, pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
    }

    #[test]
    fn cube_has_eight_vertices_and_six_quad_faces() {
        let mut pts = Vec::new();
        for m in 0..8 {
            pts.push(vec![(m & 1) as f64, (m >> 1 & 1) as f64, (m >> 2 & 1) as f64]);
        }
        pts.push(vec![0.5, 0.5, 0.5]);
        pts.push(vec![0.5, 0.5, 1.0]);
        let p = ConvexPolytope::from_points(3, pts).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.faces().len(), 6);
        assert!(p.faces().iter().all(|f| f.len() == 4));
        assert_eq!(p.edges().len(), 12);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(ConvexPolytope::from_points(2, vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).is_err());
        let flat = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]];
        assert!(ConvexPolytope::from_points(3, flat).is_err());
        assert!(ConvexPolytope::from_points(1, vec![vec![1.0], vec![1.0]]).is_err());
        assert!(ConvexPolytope::from_points(4, vec![]).is_err());
    }

    #[test]
    fn facet_normals_point_outward() {
        let pts = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let p = ConvexPolytope::from_points(3, pts).unwrap();
        let c = p.centroid_of_vertices();
        assert_eq!(p.facets().len(), 4);
        assert!(p.facets().iter().all(|h| h.slack(&c) > 0.0));
    }
}
