//! Comparability relations between shapes.
//!
//! - `B1 ≤_k B2`: some translate of `B1` lies in `kB2`.
//! - `B1 ≤_{k,s} B2`: for every `x ∈ kB2` there are translates `B1'` of `B1`
//!   and `B1''` of `sB1` with `x ∈ B1''` and `B1' ⊆ B1'' ∩ kB2`.
//! - `B1 ⊑_s B2`: for every `x ∈ B2` some translate `B1'` of `B1` contains `x`
//!   and `vol(B1' ∩ B2) >= vol(B1)/s`.
//!
//! On boxes all three are decided exactly. Axes are independent: a box of
//! extent `a` can always be slid to overlap an interval of extent `b` in
//! `min(a, b)` while covering any given point of it. This gives the closed
//! forms used below.
//!
//! For polytopes, both the `≤_{k,s}` and the `⊑_s` conditions cut out a
//! convex set of good points `x`. The first is the projection of a convex
//! feasible set. For the second, `vol((B1+t) ∩ B2)^{1/d}` is concave in `t`.
//! Probing the vertices of the quantified body is therefore sufficient; grid
//! probes are added as a guard against numerical trouble.

mod gamma;
mod intervals;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, dot, norm, polytope_intersection, ConvexPolytope, Point, Shape};
use crate::lp::{max_margin, Lp, LpOutcome};
use crate::num::{f64_to_q, q, q_max, q_min, q_pow, q_to_f64, Scalar, Q, EPS};

pub use gamma::{
    cube_section_constant, gamma_provenance, max_chord_of_square, max_section_of_cube, GAMMA_TABLE,
};
pub use intervals::{combip_check, minimal_reach, CombipOutcome, Interval, IntervalFamily};

/// Relative tolerance applied to LP optima, whose solver is accurate to
/// roughly `1e-7`.
const LP_TOL: f64 = 1e-6;

/// Verdict of a quantified relation check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum TriBool {
    Holds,
    FailsWithWitness(Point),
    Unknown,
}

impl TriBool {
    pub fn holds(&self) -> bool {
        matches!(self, TriBool::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, TriBool::FailsWithWitness(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TriBool::Unknown)
    }
}

fn check_dims(b1: &Shape, b2: &Shape) -> Result<()> {
    if b1.dim() != b2.dim() {
        return Err(Error::DimensionMismatch { expected: b1.dim(), got: b2.dim() });
    }
    if !b1.is_convex() || !b2.is_convex() {
        return Err(Error::NonConvex("relations are defined on convex shapes".into()));
    }
    Ok(())
}

fn at_least_one(name: &str, x: &Q) -> Result<()> {
    if *x < Q::one() {
        return Err(Error::InvalidParameter(format!("{name} must be >= 1, got {x}")));
    }
    Ok(())
}

/// Smallest `k` with `B1 ≤_k B2`. Exact for two boxes.
pub fn min_le_k(b1: &Shape, b2: &Shape) -> Result<Scalar> {
    check_dims(b1, b2)?;
    if let (Shape::Box(x), Shape::Box(y)) = (b1, b2) {
        let k = (0..x.dim()).map(|i| x.extent(i) / y.extent(i)).max().expect("dimension >= 1");
        return Ok(Scalar::Exact(k));
    }
    let (p1, p2) = (b1.to_polytope()?, b2.to_polytope()?);
    Ok(Scalar::Float(min_le_k_lp(&p1, &p2)?.0))
}

/// Minimises `k` over `(t, k)` subject to `n·(v + t) <= k·o` for every vertex
/// `v` of `p1` and facet `(n, o)` of `p2`.
///
/// Both bodies are first centred on their vertex centroids; the translation
/// absorbs the shift, and the program is far better conditioned.
fn min_le_k_lp(p1: &ConvexPolytope, p2: &ConvexPolytope) -> Result<(f64, Point)> {
    let (c1, c2) = (p1.centroid_of_vertices(), p2.centroid_of_vertices());
    let (k, t) = min_le_k_centred(&p1.translate(&c1.iter().map(|v| -v).collect::<Vec<_>>()), &p2.translate(&c2.iter().map(|v| -v).collect::<Vec<_>>()))?;
    // B1 - c1 + t ⊆ k(B2 - c2)  ⇔  B1 + (t - c1 + k c2) ⊆ kB2.
    let shift = t.iter().zip(&c1).zip(&c2).map(|((t, a), b)| t - a + k * b).collect();
    Ok((k, shift))
}

fn min_le_k_centred(p1: &ConvexPolytope, p2: &ConvexPolytope) -> Result<(f64, Point)> {
    let d = p1.dim();
    let mut lp = Lp::new(d + 1, false);
    lp.set_objective(d, 1.0);
    lp.set_bounds(d, 0.0, f64::INFINITY);
    for v in p1.vertices() {
        for h in p2.facets() {
            let mut row = h.normal.clone();
            row.push(-h.offset);
            lp.add_le(row, -dot(&h.normal, v));
        }
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, mut x } => {
            x.truncate(d);
            Ok((value, x))
        }
        other => Err(Error::Lp(format!("containment scaling program ended as {other:?}"))),
    }
}

/// `B1 ≤_k B2`.
pub fn le_k(b1: &Shape, b2: &Shape, k: &Q) -> Result<TriBool> {
    check_dims(b1, b2)?;
    at_least_one("k", k)?;
    if let (Shape::Box(x), Shape::Box(y)) = (b1, b2) {
        if (0..x.dim()).all(|i| x.extent(i) <= k * y.extent(i)) {
            return Ok(TriBool::Holds);
        }
        // Align the low corners; the high corner then sticks out of kB2.
        return Ok(TriBool::FailsWithWitness(
            (0..x.dim()).map(|i| q_to_f64(&(k * &y.lo()[i] + x.extent(i)))).collect(),
        ));
    }
    let (p1, p2) = (b1.to_polytope()?, b2.to_polytope()?);
    let (kmin, t) = min_le_k_lp(&p1, &p2)?;
    let kf = q_to_f64(k);
    if kmin <= kf * (1.0 + LP_TOL) {
        return Ok(TriBool::Holds);
    }
    let big = p2.scale(kf);
    let witness = p1
        .vertices()
        .iter()
        .map(|v| geometry::add(v, &t))
        .min_by(|a, b| big.depth(a).total_cmp(&big.depth(b)))
        .expect("non-empty vertex set");
    Ok(TriBool::FailsWithWitness(witness))
}

/// `B1 ≤_{k,s} B2`.
pub fn le_ks(b1: &Shape, b2: &Shape, k: &Q, s: &Q) -> Result<TriBool> {
    check_dims(b1, b2)?;
    at_least_one("k", k)?;
    at_least_one("s", s)?;
    if let (Shape::Box(x), Shape::Box(y)) = (b1, b2) {
        // Per axis the worst probe is an end of k·[lo, hi]; placing B1' flush
        // with that end inside kB2 needs a <= k b, and then B1'' of length
        // s a >= a covers both.
        if (0..x.dim()).all(|i| x.extent(i) <= k * y.extent(i)) {
            return Ok(TriBool::Holds);
        }
        return Ok(TriBool::FailsWithWitness(y.scale(k).lo_f64()));
    }
    let (p1, p2) = (b1.to_polytope()?, b2.to_polytope()?);
    let (kf, sf) = (q_to_f64(k), q_to_f64(s));
    let big = p2.scale(kf);
    let mut probes: Vec<Point> = big.vertices().to_vec();
    probes.push(big.centroid_of_vertices());
    let failing = probes.par_iter().find_first(|x| !le_ks_probe(&p1, &big, x, sf).unwrap_or(false));
    Ok(match failing {
        Some(x) => TriBool::FailsWithWitness(x.clone()),
        None => TriBool::Holds,
    })
}

/// Feasibility in `(t, u)`: `x ∈ sB1 + t`, `B1 + u ⊆ kB2`, `B1 + u ⊆ sB1 + t`.
fn le_ks_probe(p1: &ConvexPolytope, big: &ConvexPolytope, x: &[f64], s: f64) -> Result<bool> {
    let d = p1.dim();
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let zeros = vec![0.0; d];
    let neg = |n: &[f64]| n.iter().map(|v| -v).collect::<Vec<_>>();
    for h in p1.facets() {
        rows.push(([neg(&h.normal), zeros.clone()].concat(), s * h.offset - dot(&h.normal, x)));
    }
    for v in p1.vertices() {
        for h in big.facets() {
            rows.push(([zeros.clone(), h.normal.clone()].concat(), h.offset - dot(&h.normal, v)));
        }
        for h in p1.facets() {
            rows.push(([neg(&h.normal), h.normal.clone()].concat(), s * h.offset - dot(&h.normal, v)));
        }
    }
    let (margin, _) = max_margin(2 * d, &rows)?;
    Ok(margin >= -EPS * big.scale_hint().max(p1.scale_hint()) * s.max(1.0))
}

/// Probe budget for polytope `⊑_s` checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeBudget {
    /// Grid points per axis before capping.
    pub grid_per_axis: usize,
    /// Cap on the total number of grid probes; vertices are always probed.
    pub max_grid_probes: usize,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        ProbeBudget { grid_per_axis: 16, max_grid_probes: 256 }
    }
}

fn grid_probes(p: &ConvexPolytope, budget: ProbeBudget) -> Vec<Point> {
    let d = p.dim();
    let mut g = budget.grid_per_axis.max(1);
    while g > 1 && g.pow(d as u32) > budget.max_grid_probes {
        g -= 1;
    }
    let (lo, hi) = p.bbox();
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let x: Point = (0..d).map(|i| lo[i] + (hi[i] - lo[i]) * (idx[i] as f64 + 0.5) / g as f64).collect();
        if p.contains(&x, 0.0) {
            out.push(x);
        }
        let mut i = 0;
        while i < d {
            idx[i] += 1;
            if idx[i] < g {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    out
}

fn search_directions(d: usize) -> Vec<Point> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..16)
            .map(|i| {
                let a = std::f64::consts::PI * i as f64 / 8.0;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let mut out = Vec::new();
            for a in -1i32..=1 {
                for b in -1i32..=1 {
                    for c in -1i32..=1 {
                        if (a, b, c) != (0, 0, 0) {
                            let v = vec![a as f64, b as f64, c as f64];
                            let l = norm(&v);
                            out.push(v.iter().map(|x| x / l).collect());
                        }
                    }
                }
            }
            out
        }
    }
}

/// Largest `vol((B1 + t) ∩ B2)` found over translations with `x ∈ B1 + t`.
///
/// Writes `t = x - y` with `y ∈ B1` and runs a pattern search on `y`. The
/// objective is concave up to a power, so local optima are global; the
/// search stops early once `target` is reached.
fn best_overlap(p1: &ConvexPolytope, p2: &ConvexPolytope, x: &[f64], target: f64) -> f64 {
    let eval = |y: &[f64]| -> f64 {
        let t = geometry::sub(x, y);
        polytope_intersection(&p1.translate(&t), p2).map_or(0.0, |p| geometry::polytope_volume(&p))
    };
    let c1 = p1.centroid_of_vertices();
    let c2 = p2.centroid_of_vertices();
    // Second start: the translate centered on B2, pulled back into B1.
    let aim = geometry::add(&geometry::sub(x, &c2), &c1);
    let mut lo = 0.0;
    let mut hi = 1.0;
    if !p1.contains(&aim, 0.0) {
        for _ in 0..40 {
            let mid = (lo + hi) / 2.0;
            let y: Point = c1.iter().zip(&aim).map(|(a, b)| a + (b - a) * mid).collect();
            if p1.contains(&y, 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        lo = 1.0;
    }
    let pulled: Point = c1.iter().zip(&aim).map(|(a, b)| a + (b - a) * lo).collect();
    let (blo, bhi) = p1.bbox();
    let diam = blo.iter().zip(&bhi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
    let dirs = search_directions(p1.dim());
    let mut best = 0.0f64;
    for start in [pulled, c1] {
        let mut y = start;
        let mut cur = eval(&y);
        let mut step = diam / 4.0;
        while step > 1e-5 * diam && cur < target {
            let mut moved = false;
            for dir in &dirs {
                let cand: Point = y.iter().zip(dir).map(|(a, b)| a + b * step).collect();
                if !p1.contains(&cand, 0.0) {
                    continue;
                }
                let v = eval(&cand);
                if v > cur {
                    cur = v;
                    y = cand;
                    moved = true;
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
        best = best.max(cur);
        if best >= target {
            break;
        }
    }
    best
}

/// `s` needed for `B1 ⊑_s B2`. Exact for two boxes: `∏a_i / ∏min(a_i, b_i)`.
/// For polytopes it is the worst ratio over the probes, an upper estimate of
/// the true value up to search accuracy.
pub fn required_s(b1: &Shape, b2: &Shape, budget: ProbeBudget) -> Result<Scalar> {
    check_dims(b1, b2)?;
    if let (Shape::Box(x), Shape::Box(y)) = (b1, b2) {
        let overlap = (0..x.dim()).fold(Q::one(), |acc, i| acc * q_min(&x.extent(i), &y.extent(i)));
        return Ok(Scalar::Exact(x.volume() / overlap));
    }
    let (p1, p2) = (b1.to_polytope()?, b2.to_polytope()?);
    let vol1 = geometry::polytope_volume(&p1);
    let mut probes = p2.vertices().to_vec();
    probes.extend(grid_probes(&p2, budget));
    let worst = probes
        .par_iter()
        .map(|x| best_overlap(&p1, &p2, x, f64::INFINITY))
        .reduce(|| f64::INFINITY, f64::min);
    Ok(Scalar::Float(if worst > 0.0 { (vol1 / worst).max(1.0) } else { f64::INFINITY }))
}

/// `B1 ⊑_s B2` with the default probe budget.
pub fn sqsubseteq_s(b1: &Shape, b2: &Shape, s: &Q) -> Result<TriBool> {
    sqsubseteq_s_with(b1, b2, s, ProbeBudget::default())
}

pub fn sqsubseteq_s_with(b1: &Shape, b2: &Shape, s: &Q, budget: ProbeBudget) -> Result<TriBool> {
    check_dims(b1, b2)?;
    at_least_one("s", s)?;
    if let (Shape::Box(x), Shape::Box(y)) = (b1, b2) {
        let overlap = (0..x.dim()).fold(Q::one(), |acc, i| acc * q_min(&x.extent(i), &y.extent(i)));
        return Ok(if overlap * s >= x.volume() {
            TriBool::Holds
        } else {
            TriBool::FailsWithWitness(y.lo_f64())
        });
    }
    let (p1, p2) = (b1.to_polytope()?, b2.to_polytope()?);
    let sf = q_to_f64(s);
    let (vol1, vol2) = (geometry::polytope_volume(&p1), geometry::polytope_volume(&p2));
    // No overlap can exceed either volume.
    if vol1 > sf * vol1.min(vol2) * (1.0 + 1e-9) {
        return Ok(TriBool::FailsWithWitness(p2.vertices()[0].clone()));
    }
    let target = vol1 / sf * (1.0 - 1e-9);
    let mut probes = p2.vertices().to_vec();
    probes.extend(grid_probes(&p2, budget));
    let all_pass = probes.par_iter().all(|x| best_overlap(&p1, &p2, x, target) >= target);
    Ok(if all_pass { TriBool::Holds } else { TriBool::Unknown })
}

/// Which of the two `⊑_s` directions hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
    Both,
    Neither,
    Undetermined,
}

/// Pairwise `⊑_s` comparability of two shapes in a scanned family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityReport {
    pub pair: (usize, usize),
    pub relation: String,
    pub k: Option<Scalar>,
    pub s: Scalar,
    pub direction: Direction,
    pub forward: TriBool,
    pub backward: TriBool,
    /// `s` needed for `B_i ⊑ B_j` and for `B_j ⊑ B_i`.
    pub required: (Scalar, Scalar),
    pub verdict: TriBool,
    pub witness: Option<Point>,
}

/// Result of [`comparability_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityScan {
    pub reports: Vec<ComparabilityReport>,
    /// Smallest `s` making every pair comparable; exact on boxes.
    pub s_star: Scalar,
}

fn verdict_from_required(req: &Scalar, s: &Q, b1: &Shape, b2: &Shape) -> Result<TriBool> {
    Ok(match req {
        Scalar::Exact(r) => {
            if r <= s {
                TriBool::Holds
            } else {
                TriBool::FailsWithWitness(b2.bbox_f64().0)
            }
        }
        Scalar::Float(r) => {
            if *r <= q_to_f64(s) * (1.0 + 1e-9) {
                TriBool::Holds
            } else {
                // Falls back to the decision procedure, which can still prove
                // failure through the volume bound.
                match sqsubseteq_s(b1, b2, s)? {
                    TriBool::Holds => TriBool::Holds,
                    other => other,
                }
            }
        }
    })
}

/// Pairwise `⊑_s` comparability over a family, plus the smallest `s` that
/// makes every pair comparable.
pub fn comparability_scan(shapes: &[Shape], s: &Q) -> Result<ComparabilityScan> {
    comparability_scan_with(shapes, s, ProbeBudget::default())
}

pub fn comparability_scan_with(shapes: &[Shape], s: &Q, budget: ProbeBudget) -> Result<ComparabilityScan> {
    if shapes.is_empty() {
        return Err(Error::InvalidParameter("comparability scan of an empty family".into()));
    }
    at_least_one("s", s)?;
    let pairs: Vec<(usize, usize)> =
        (0..shapes.len()).flat_map(|i| (i + 1..shapes.len()).map(move |j| (i, j))).collect();
    let reports: Vec<ComparabilityReport> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<ComparabilityReport> {
            let (a, b) = (&shapes[i], &shapes[j]);
            let fwd_req = required_s(a, b, budget)?;
            let bwd_req = required_s(b, a, budget)?;
            let forward = verdict_from_required(&fwd_req, s, a, b)?;
            let backward = verdict_from_required(&bwd_req, s, b, a)?;
            let direction = match (&forward, &backward) {
                (TriBool::Holds, TriBool::Holds) => Direction::Both,
                (TriBool::Holds, _) => Direction::Forward,
                (_, TriBool::Holds) => Direction::Backward,
                (TriBool::FailsWithWitness(_), TriBool::FailsWithWitness(_)) => Direction::Neither,
                _ => Direction::Undetermined,
            };
            let (verdict, witness) = match direction {
                Direction::Both | Direction::Forward | Direction::Backward => (TriBool::Holds, None),
                Direction::Neither => {
                    let TriBool::FailsWithWitness(w) = &forward else { unreachable!() };
                    (TriBool::FailsWithWitness(w.clone()), Some(w.clone()))
                }
                Direction::Undetermined => (TriBool::Unknown, None),
            };
            Ok(ComparabilityReport {
                pair: (i, j),
                relation: "sqsubseteq".into(),
                k: None,
                s: Scalar::Exact(s.clone()),
                direction,
                forward,
                backward,
                required: (fwd_req, bwd_req),
                verdict,
                witness,
            })
        })
        .collect::<Result<_>>()?;
    let mut s_star = Scalar::Exact(Q::one());
    for r in &reports {
        let pair_min = if r.required.0.compare(&r.required.1).is_le() { &r.required.0 } else { &r.required.1 };
        if pair_min.compare(&s_star).is_gt() {
            s_star = pair_min.clone();
        }
    }
    Ok(ComparabilityScan { reports, s_star })
}

/// `√d·γ_d`, rounded to 9 decimals. The table holds 12 digits, so this
/// absorbs its rounding and gives exactly 2 for `d = 2`.
fn sqrt_d_gamma(d: usize) -> Result<Q> {
    let v = (d as f64).sqrt() * cube_section_constant(d)?;
    let scaled = (v * 1e9).round() as i64;
    Ok(crate::num::qr(scaled, 1_000_000_000))
}

/// `k = s·d^{d+3/2}·γ_d`: overlap comparability with parameter `s` implies
/// `≤_{k,k}`.
pub fn k_from_overlap(s: &Q, d: usize) -> Result<Q> {
    Ok(s * q_pow(&q(d as i64), d as u32 + 1) * sqrt_d_gamma(d)?)
}

/// `s' = max(s, k^d)` with `k` from [`k_from_overlap`]: comparable shapes
/// with the smaller volume first satisfy `⊑_{s'}`.
pub fn comparable_overlap_param(s: &Q, d: usize) -> Result<Q> {
    let k = k_from_overlap(s, d)?;
    Ok(q_max(s, &q_pow(&k, d as u32)))
}

/// Constants composed for the coloring bound of a `(c, ⊑_s)`-tame
/// representation ordered by volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComposedConstants {
    pub s: Scalar,
    pub s_prime: Scalar,
    pub k_prime: Scalar,
}

/// `s' = max(s, k(s)^d)` and `k' = k(s')`.
pub fn compose_constants(s: &Q, d: usize) -> Result<ComposedConstants> {
    let s_prime = comparable_overlap_param(s, d)?;
    let k_prime = k_from_overlap(&s_prime, d)?;
    Ok(ComposedConstants { s: s.clone().into(), s_prime: s_prime.into(), k_prime: k_prime.into() })
}

fn vacuous(what: &str) -> bool {
    log::warn!("{what} was undecided; treating the implication as vacuously true");
    true
}

/// `B1 ≤_{k,s} B2` implies `B1 ⊑_{max(k,s)^d} B2`, checked on one pair.
pub fn verify_rel1(b1: &Shape, b2: &Shape, k: &Q, s: &Q) -> Result<bool> {
    match le_ks(b1, b2, k, s)? {
        TriBool::Holds => {}
        TriBool::FailsWithWitness(_) => return Ok(true),
        TriBool::Unknown => return Ok(vacuous("le_ks")),
    }
    let m = q_pow(&q_max(k, s), b1.dim() as u32);
    Ok(match sqsubseteq_s(b1, b2, &m)? {
        TriBool::Holds => true,
        TriBool::FailsWithWitness(_) => false,
        TriBool::Unknown => vacuous("sqsubseteq_s"),
    })
}

/// `B1 ⊑_s B2` implies `B1 ≤_{k,k} B2` for `k = s·d^{d+3/2}·γ_d`.
pub fn verify_rel2(b1: &Shape, b2: &Shape, s: &Q) -> Result<bool> {
    let d = b1.dim();
    let k = k_from_overlap(s, d)?;
    match sqsubseteq_s(b1, b2, s)? {
        TriBool::Holds => {}
        TriBool::FailsWithWitness(_) => return Ok(true),
        TriBool::Unknown => return Ok(vacuous("sqsubseteq_s")),
    }
    Ok(match le_ks(b1, b2, &k, &k)? {
        TriBool::Holds => true,
        TriBool::FailsWithWitness(_) => false,
        TriBool::Unknown => vacuous("le_ks"),
    })
}

/// For `⊑_s`-comparable shapes with `vol(B1) <= vol(B2)`, checks
/// `B1 ⊑_{s'} B2` with `s' = max(s, k^d)`.
pub fn verify_cmp(b1: &Shape, b2: &Shape, s: &Q) -> Result<bool> {
    check_dims(b1, b2)?;
    let (v1, v2) = (geometry::volume(b1), geometry::volume(b2));
    if v1.compare(&v2).is_gt() {
        return Err(Error::Precondition(format!("vol(B1) = {v1} exceeds vol(B2) = {v2}")));
    }
    let fwd = sqsubseteq_s(b1, b2, s)?;
    let comparable = fwd.holds() || sqsubseteq_s(b2, b1, s)?.holds();
    if !comparable {
        return Err(Error::Precondition(format!("shapes are not shown to be comparable at s = {s}")));
    }
    let s_prime = comparable_overlap_param(s, b1.dim())?;
    Ok(match sqsubseteq_s(b1, b2, &s_prime)? {
        TriBool::Holds => true,
        TriBool::FailsWithWitness(_) => false,
        TriBool::Unknown => vacuous("sqsubseteq_s"),
    })
}

/// Exact rational from a float parameter, for callers holding `f64` values.
pub fn param(x: f64) -> Result<Q> {
    let v = f64_to_q(x)?;
    if v.is_negative() || v.is_zero() {
        return Err(Error::InvalidParameter(format!("parameter must be positive, got {x}")));
    }
    Ok(v)
}
