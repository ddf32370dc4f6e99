//! Maximum hyperplane sections of the unit cube.

use crate::error::{Error, Result};

/// `(d, γ_d, how the value was obtained)`.
pub const GAMMA_TABLE: [(usize, f64, &str); 3] = [
    (1, 1.0, "a hyperplane section of [0,1] is a point; its 0-dimensional volume is 1"),
    (
        2,
        1.41421356237,
        "max_chord_of_square(1000): 1000 orientations, ternary search over offsets, \
         then ternary refinement of the best orientation",
    ),
    (
        3,
        1.41421356237,
        "max_section_of_cube(4000): 4000 normals on a Fibonacci hemisphere, ternary search \
         over offsets, then pattern refinement of the best normal",
    ),
];

/// Largest `(d-1)`-volume of a hyperplane section of the unit cube in `R^d`.
pub fn cube_section_constant(d: usize) -> Result<f64> {
    GAMMA_TABLE.iter().find(|(dd, _, _)| *dd == d).map(|e| e.1).ok_or(Error::UnsupportedDimension(d))
}

pub fn gamma_provenance(d: usize) -> Option<&'static str> {
    GAMMA_TABLE.iter().find(|(dd, _, _)| *dd == d).map(|e| e.2)
}

const SQUARE: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];

/// Length of `{x ∈ [0,1]^2 : n·x = c}`.
fn chord(theta: f64, c: f64) -> f64 {
    let n = [theta.cos(), theta.sin()];
    let mut pts: Vec<[f64; 2]> = Vec::new();
    for i in 0..4 {
        let (a, b) = (SQUARE[i], SQUARE[(i + 1) % 4]);
        let (sa, sb) = (n[0] * a[0] + n[1] * a[1] - c, n[0] * b[0] + n[1] * b[1] - c);
        if sa == 0.0 {
            pts.push(a);
        } else if sa * sb < 0.0 {
            let t = sa / (sa - sb);
            pts.push([a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]);
        }
    }
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max(((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt());
        }
    }
    best
}

/// Maximum of a unimodal function on `[lo, hi]`.
fn ternary_max(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let x = (lo + hi) / 2.0;
    (x, f(x))
}

fn best_chord_at(theta: f64) -> f64 {
    let (n0, n1) = (theta.cos(), theta.sin());
    let proj: Vec<f64> = SQUARE.iter().map(|v| n0 * v[0] + n1 * v[1]).collect();
    let lo = proj.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = proj.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // Section length is concave in the offset, so ternary search is exact.
    ternary_max(lo, hi, |c| chord(theta, c)).1
}

/// Maximum chord of the unit square: `orientations` sampled angles, each
/// with an exact offset search, then a refinement around the best angle.
pub fn max_chord_of_square(orientations: usize) -> f64 {
    let step = std::f64::consts::PI / orientations as f64;
    let (best_i, _) = (0..orientations)
        .map(|i| (i, best_chord_at(step * i as f64)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let centre = step * best_i as f64;
    let (_, v) = ternary_max(centre - step, centre + step, best_chord_at);
    v.max(best_chord_at(centre))
}

/// Area of `{x ∈ [0,1]^3 : n·x = c}`.
fn section_area(n: [f64; 3], c: f64) -> f64 {
    let mut pts: Vec<[f64; 3]> = Vec::new();
    for a in 0..8u32 {
        for axis in 0..3 {
            if a >> axis & 1 == 1 {
                continue;
            }
            let b = a | 1 << axis;
            let pa = [(a & 1) as f64, (a >> 1 & 1) as f64, (a >> 2 & 1) as f64];
            let pb = [(b & 1) as f64, (b >> 1 & 1) as f64, (b >> 2 & 1) as f64];
            let sa = n[0] * pa[0] + n[1] * pa[1] + n[2] * pa[2] - c;
            let sb = n[0] * pb[0] + n[1] * pb[1] + n[2] * pb[2] - c;
            if sa == 0.0 {
                pts.push(pa);
            }
            if sb == 0.0 {
                pts.push(pb);
            }
            if sa * sb < 0.0 {
                let t = sa / (sa - sb);
                pts.push([pa[0] + (pb[0] - pa[0]) * t, pa[1] + (pb[1] - pa[1]) * t, pa[2] + (pb[2] - pa[2]) * t]);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup_by(|a, b| (0..3).all(|i| (a[i] - b[i]).abs() < 1e-14));
    if pts.len() < 3 {
        return 0.0;
    }
    let m = pts.len() as f64;
    let ctr = [0, 1, 2].map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / m);
    let u0 = [0, 1, 2].map(|i| pts[0][i] - ctr[i]);
    let ul = (u0[0] * u0[0] + u0[1] * u0[1] + u0[2] * u0[2]).sqrt();
    if ul == 0.0 {
        return 0.0;
    }
    let u = u0.map(|x| x / ul);
    let w = [n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]];
    let mut planar: Vec<(f64, f64)> = pts
        .iter()
        .map(|p| {
            let d = [p[0] - ctr[0], p[1] - ctr[1], p[2] - ctr[2]];
            (d[0] * u[0] + d[1] * u[1] + d[2] * u[2], d[0] * w[0] + d[1] * w[1] + d[2] * w[2])
        })
        .collect();
    planar.sort_by(|a, b| a.1.atan2(a.0).total_cmp(&b.1.atan2(b.0)));
    let k = planar.len();
    (0..k).map(|i| planar[i].0 * planar[(i + 1) % k].1 - planar[(i + 1) % k].0 * planar[i].1).sum::<f64>().abs() / 2.0
}

fn best_section_for(n: [f64; 3]) -> f64 {
    let l = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let n = n.map(|x| x / l);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for a in 0..8u32 {
        let s = n[0] * (a & 1) as f64 + n[1] * (a >> 1 & 1) as f64 + n[2] * (a >> 2 & 1) as f64;
        lo = lo.min(s);
        hi = hi.max(s);
    }
    // The square root of the section area is concave in the offset.
    ternary_max(lo, hi, |c| section_area(n, c)).1
}

/// Maximum section of the unit cube over `normals` directions on a Fibonacci
/// hemisphere, refined by a pattern search on the best normal.
pub fn max_section_of_cube(normals: usize) -> f64 {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut best = (f64::NEG_INFINITY, [0.0, 0.0, 1.0]);
    for i in 0..normals {
        let z = 1.0 - (i as f64 + 0.5) / normals as f64;
        let r = (1.0 - z * z).sqrt();
        let n = [r * (golden * i as f64).cos(), r * (golden * i as f64).sin(), z];
        let v = best_section_for(n);
        if v > best.0 {
            best = (v, n);
        }
    }
    let (mut cur, mut n) = best;
    let mut step = 0.05;
    while step > 1e-7 {
        let mut moved = false;
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut m = n;
                m[axis] += sign * step;
                let v = best_section_for(m);
                if v > cur {
                    cur = v;
                    let l = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                    n = m.map(|x| x / l);
                    moved = true;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    cur
}
