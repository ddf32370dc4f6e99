//! Parameterized instance generators. Every generator checks its own output
//! against the expected graph, thinness and comparability before returning.

use std::collections::HashMap;

use num_traits::{One, Signed};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coloring::Ordering;
use crate::error::{Error, Result};
use crate::geometry::{polytopes_intersect, shapes_intersect, BoxShape, BoxUnion, ConvexPolytope, PlacedShape, Point, Shape};
use crate::graph::{
    build_intersection_graph, check_tame, product_representation, strong_product, thinness,
    CertStatus, Graph, ProductMode, Representation,
};
use crate::num::{f64_to_q, q, q_to_f64, qr, Scalar, Q, EPS};
use crate::relations::{comparability_scan, le_k};


/// Which generator produced an instance, with what parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
}

/// Thinness and comparability measured on the generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub thinness: usize,
    pub thinness_status: CertStatus,
    /// Smallest `s` making every pair `⊑_s`-comparable, when computed.
    pub s_star: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceBundle {
    pub representation: Representation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_graph: Option<Graph>,
    /// Upper bound on the thinness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_thinness: Option<usize>,
    /// Every pair is expected to be `⊑_s`-comparable for this `s`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_q")]
    pub expected_s: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Ordering>,
    pub provenance: Provenance,
    pub measured: Measured,
}

mod opt_q {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::num::{serde_q, Q};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => serde_q::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "serde_q")] Q);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

impl InstanceBundle {
    pub fn n(&self) -> usize {
        self.representation.len()
    }

    /// Rechecks every expected field; errors name the first mismatch.
    pub fn verify(&self) -> Result<()> {
        let r = &self.representation;
        if let Some(ord) = &self.ordering {
            if ord.len() != r.len() {
                return Err(Error::Generator(format!("ordering has {} vertices, instance {}", ord.len(), r.len())));
            }
        }
        if let Some(g) = &self.expected_graph {
            let built = build_intersection_graph(r)?;
            if &built != g {
                return Err(Error::Generator(format!(
                    "{}: built graph has {} edges, expected {}",
                    self.provenance.generator,
                    built.m(),
                    g.m()
                )));
            }
        }
        if let Some(c) = self.expected_thinness {
            let t = thinness(r)?;
            if t.c > c {
                return Err(Error::Generator(format!(
                    "{}: thinness {} exceeds {c} at {:?}",
                    self.provenance.generator, t.c, t.witness
                )));
            }
        }
        if let Some(s) = &self.expected_s {
            let cert = check_tame(r, self.expected_thinness.unwrap_or(r.len()), s)?;
            if !cert.certified || !cert.undecided.is_empty() {
                return Err(Error::Generator(format!(
                    "{}: not certified at s = {s}: {:?}",
                    self.provenance.generator, cert.failures
                )));
            }
        }
        Ok(())
    }

    fn finish(mut self, s_star: Option<Scalar>) -> Result<Self> {
        let t = thinness(&self.representation)?;
        self.measured = Measured { thinness: t.c, thinness_status: t.status, s_star };
        self.verify()?;
        Ok(self)
    }

    fn new(representation: Representation, generator: &str, params: serde_json::Value, seed: Option<u64>) -> Self {
        InstanceBundle {
            representation,
            expected_graph: None,
            expected_thinness: None,
            expected_s: None,
            ordering: None,
            provenance: Provenance { generator: generator.into(), params, seed },
            measured: Measured { thinness: 0, thinness_status: CertStatus::Exact, s_star: None },
        }
    }
}

fn placed_box(lo: Vec<Q>, hi: Vec<Q>) -> Result<PlacedShape> {
    let ext: Vec<Q> = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
    PlacedShape::new(Shape::Box(BoxShape::from_extents(&ext)?), lo)
}

fn complete_bipartite(m: usize) -> Graph {
    Graph::from_edges(2 * m, (0..m).flat_map(|i| (0..m).map(move |j| (i, m + j)))).expect("valid K_{m,m}")
}

fn at_least_one(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// `m` horizontal and `m` vertical rectangles of the given thickness forming
/// `K_{m,m}`. Horizontals are vertices `0..m`, verticals `m..2m`.
pub fn narrow_rectangles_bipartite(m: usize, thickness: &Q) -> Result<InstanceBundle> {
    at_least_one("m", m)?;
    if !thickness.is_positive() || *thickness > qr(1, 10 * m as i64) {
        return Err(Error::InvalidParameter(format!("thickness {thickness} must lie in (0, 1/(10m)]")));
    }
    let long = q(m as i64 + 1);
    let mut placements = Vec::with_capacity(2 * m);
    for i in 1..=m {
        let y = q(i as i64);
        placements.push(placed_box(vec![q(0), y.clone()], vec![long.clone(), y + thickness])?);
    }
    for j in 1..=m {
        let x = q(j as i64);
        placements.push(placed_box(vec![x.clone(), q(0)], vec![x + thickness, long.clone()])?);
    }
    let mut b = InstanceBundle::new(
        Representation::new(placements)?,
        "narrow-rectangles",
        json!({ "m": m, "thickness": thickness.to_string() }),
        None,
    );
    b.expected_graph = Some(complete_bipartite(m));
    b.expected_thinness = Some(2);
    b.finish(None)
}

/// Half-thickness of the boxes around the segments `L_i`.
const WEDGE_THETA: f64 = 1e-3;
const WEDGE_MAX_DOUBLINGS: usize = 40;
const WEDGE_BISECTIONS: usize = 8;

/// Segment boxes `L_1..L_m` (vertices `0..m`) and nested wedges `R_1..R_m`
/// (vertices `m..2m`) in three dimensions forming `K_{m,m}`.
///
/// `R_i` is the hull of the segment `{(x, i, 0) : 1 <= x <= m}` and
/// `R_{i-1} + (0, y_i, 1)`, with `y_i` doubled until `R_i` misses every
/// earlier wedge and then bisected back toward the smallest such value. Each
/// wedge contains that translate of its predecessor, so `R_{i-1} ≤_1 R_i`;
/// the containment is checked vertex by vertex.
pub fn wedge_family(m: usize) -> Result<InstanceBundle> {
    at_least_one("m", m)?;
    let th = f64_to_q(WEDGE_THETA)?;
    let mf = m as f64;
    let mut placements = Vec::with_capacity(2 * m);
    for i in 1..=m {
        let x = q(i as i64);
        placements.push(placed_box(
            vec![&x - &th, q(1) - &th, -th.clone()],
            vec![&x + &th, q(m as i64) + &th, th.clone()],
        )?);
    }
    let l1 = placements[0].realize().to_polytope()?;
    let mut wedges: Vec<ConvexPolytope> = Vec::with_capacity(m);
    let mut prev = l1;
    for i in 1..=m {
        let seg = [vec![1.0, i as f64, 0.0], vec![mf, i as f64, 0.0]];
        let build = |y: f64| -> Result<ConvexPolytope> {
            let mut pts: Vec<Point> = seg.to_vec();
            pts.extend(prev.translate(&[0.0, y, 1.0]).vertices().iter().cloned());
            ConvexPolytope::from_points(3, pts)
        };
        let clear = |w: &ConvexPolytope| -> Result<bool> {
            for old in &wedges {
                if polytopes_intersect(w, old)?.is_some() {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut y = 1.0;
        let mut found = None;
        for _ in 0..WEDGE_MAX_DOUBLINGS {
            let cand = build(y)?;
            if clear(&cand)? {
                found = Some(cand);
                break;
            }
            y *= 2.0;
        }
        let Some(mut w) = found else {
            return Err(Error::Generator(format!("wedge R_{i} could not be separated from earlier wedges")));
        };
        // Pull y back toward the smallest separating value to keep
        // coordinates small.
        let mut bad = y / 2.0;
        if y > 1.0 {
            for _ in 0..WEDGE_BISECTIONS {
                let mid = (bad + y) / 2.0;
                let cand = build(mid)?;
                if clear(&cand)? {
                    y = mid;
                    w = cand;
                } else {
                    bad = mid;
                }
            }
        }
        // R_{i-1} + (0, y, 1) ⊆ R_i witnesses R_{i-1} ≤_1 R_i.
        let tol = EPS * w.scale_hint();
        if let Some(v) = prev.translate(&[0.0, y, 1.0]).vertices().iter().find(|v| !w.contains(v, tol)) {
            return Err(Error::Generator(format!("wedge R_{i} misses the vertex {v:?} of the shifted R_{}", i - 1)));
        }
        wedges.push(w.clone());
        prev = w;
    }
    placements.extend(wedges.into_iter().map(|w| PlacedShape::at_origin(Shape::Polytope(w))));
    let mut b = InstanceBundle::new(Representation::new(placements)?, "wedge", json!({ "m": m }), None);
    b.expected_graph = Some(complete_bipartite(m));
    b.expected_thinness = Some(2);
    b.finish(None)
}

/// Squares representing the star `T_r`: center `[0, 2r]^2` is vertex `0`,
/// leaf `k` is a unit square straddling the bottom edge, with gaps of
/// `1/10` between leaves.
pub fn star_squares(r: usize) -> Result<Representation> {
    at_least_one("r", r)?;
    let mut placements = vec![placed_box(vec![q(0), q(0)], vec![q(2 * r as i64), q(2 * r as i64)])?];
    for k in 0..r {
        let x = qr(11 * k as i64, 10);
        placements.push(placed_box(vec![x.clone(), qr(-1, 2)], vec![x + q(1), qr(1, 2)])?);
    }
    Representation::new(placements)
}

/// Unit intervals representing the path `P_t`, consecutive ones overlapping
/// by `1/10`.
pub fn path_intervals(t: usize) -> Result<Representation> {
    at_least_one("t", t)?;
    Representation::new(
        (0..t)
            .map(|j| {
                let x = qr(9 * j as i64, 10);
                placed_box(vec![x.clone()], vec![x + q(1)])
            })
            .collect::<Result<_>>()?,
    )
}

/// Boxes in three dimensions representing `T_r ⊠ P_t`; vertex `(a, b)` is
/// `a * t + b`, with `a = 0` the star center.
pub fn star_path_boxes(r: usize, t: usize) -> Result<InstanceBundle> {
    let rep = product_representation(&star_squares(r)?, &path_intervals(t)?, ProductMode::Product)?;
    let mut b = InstanceBundle::new(rep, "star-path", json!({ "r": r, "t": t }), None);
    b.expected_graph = Some(strong_product(&Graph::star(r), &Graph::path(t)));
    b.expected_thinness = Some(4);
    b.expected_s = Some(Q::one());
    b.finish(Some(Scalar::Exact(Q::one())))
}

/// Adds `hubs` new vertices, each joined to every old vertex by a fresh
/// path of length `len`. New ids follow the old ones: hubs first, then the
/// path internals hub by hub, old vertex by old vertex, from the hub side.
/// The ordering is extended in the same order.
pub fn gplus(g: &Graph, ord: &Ordering, hubs: usize, len: usize) -> Result<(Graph, Ordering)> {
    at_least_one("path length", len)?;
    if ord.len() != g.n() {
        return Err(Error::InvalidParameter(format!("ordering has {} vertices, graph {}", ord.len(), g.n())));
    }
    let n0 = g.n();
    let mut edges = g.edges();
    let mut next = n0 + hubs;
    for h in 0..hubs {
        let hub = n0 + h;
        for v in 0..n0 {
            let mut at = hub;
            for _ in 1..len {
                edges.push((at, next));
                at = next;
                next += 1;
            }
            edges.push((at, v));
        }
    }
    let mut order = ord.order().to_vec();
    order.extend(n0..next);
    Ok((Graph::from_edges(next, edges)?, Ordering::new(order)?))
}

/// `|V(G^+)|` from `|V(G)|`.
pub fn gplus_vertex_count(n_prev: usize, hubs: usize, len: usize) -> usize {
    n_prev + hubs * (1 + n_prev * (len - 1))
}

/// Iterated hub towers: `G_0` is edgeless on `counts[0]` vertices and
/// `G_i = G_{i-1}^+(counts[i], lengths[i-1])`. Returns `G_d` and the
/// ordering that lists each level's old vertices first.
pub fn hub_star_family(counts: &[usize], lengths: &[usize]) -> Result<(Graph, Ordering)> {
    let Some((&n0, rest)) = counts.split_first() else {
        return Err(Error::InvalidParameter("hub tower needs at least one level".into()));
    };
    if rest.len() != lengths.len() {
        return Err(Error::InvalidParameter(format!(
            "{} hub levels need as many path lengths, got {}",
            rest.len(),
            lengths.len()
        )));
    }
    at_least_one("N_0", n0)?;
    let mut g = Graph::empty(n0);
    let mut ord = Ordering::identity(n0);
    for (&hubs, &len) in rest.iter().zip(lengths) {
        at_least_one("hub count", hubs)?;
        let expected = gplus_vertex_count(g.n(), hubs, len);
        (g, ord) = gplus(&g, &ord, hubs, len)?;
        if g.n() != expected {
            return Err(Error::Generator(format!("hub level has {} vertices, expected {expected}", g.n())));
        }
    }
    Ok((g, ord))
}

/// Smallest side length the float backend is trusted with.
const MIN_SIDE: f64 = 1e-6;

/// Trapezoids `T_h` and squares `S_h` whose side lengths shrink by
/// `ℓ_{h+1} = ℓ_h / (2(h+1))`.
#[derive(Clone, Debug)]
pub struct SStarFamily {
    /// `ℓ_1, ..., ℓ_{h_max}`.
    pub ell: Vec<Q>,
    pub trapezoids: Vec<Shape>,
    pub squares: Vec<Shape>,
}

pub fn trapezoid(h: usize, ell: &Q) -> Result<Shape> {
    let l = q_to_f64(ell);
    let hf = h as f64;
    Ok(Shape::Polytope(ConvexPolytope::from_points(
        2,
        vec![vec![0.0, 0.0], vec![l, 0.0], vec![l, hf * l], vec![0.0, 2.0 * hf * l]],
    )?))
}

/// Builds the shapes for `h = 1..=h_max` and checks `T_{h+1} ≤_1 S_h ≤_1 T_h`.
pub fn sstar_family(h_max: usize) -> Result<SStarFamily> {
    at_least_one("h_max", h_max)?;
    let mut ell = vec![Q::one()];
    for h in 1..h_max {
        let next = &ell[h - 1] / q(2 * (h as i64 + 1));
        ell.push(next);
    }
    if let Some(h) = ell.iter().position(|l| q_to_f64(l) < MIN_SIDE) {
        return Err(Error::InvalidParameter(format!(
            "h_max = {h_max} gives side {} at h = {}, below {MIN_SIDE}",
            ell[h],
            h + 1
        )));
    }
    let trapezoids: Vec<Shape> = ell.iter().enumerate().map(|(i, l)| trapezoid(i + 1, l)).collect::<Result<_>>()?;
    let squares: Vec<Shape> =
        ell.iter().map(|l| Ok(Shape::Box(BoxShape::from_extents(&[l.clone(), l.clone()])?))).collect::<Result<_>>()?;
    let one = Q::one();
    for h in 0..h_max {
        if !le_k(&squares[h], &trapezoids[h], &one)?.holds() {
            return Err(Error::Generator(format!("S_{0} ≤_1 T_{0} failed", h + 1)));
        }
        if h + 1 < h_max && !le_k(&trapezoids[h + 1], &squares[h], &one)?.holds() {
            return Err(Error::Generator(format!("T_{} ≤_1 S_{} failed", h + 2, h + 1)));
        }
    }
    Ok(SStarFamily { ell, trapezoids, squares })
}

impl SStarFamily {
    pub fn h_max(&self) -> usize {
        self.ell.len()
    }

    /// `n` shapes drawn from the family and placed at random so that no
    /// three of them pairwise meet, which makes the result 2-thin.
    ///
    /// Level `h` is drawn with weight `2^{-(h-1)}`; placements use a grid of
    /// `1/1024` in a square window sized for about one shape per unit area.
    pub fn random_instance(&self, n: usize, seed: u64) -> Result<InstanceBundle> {
        at_least_one("n", n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side = ((n as f64) * 0.8).sqrt().max(1.0);
        let grid = (side * 1024.0) as i64;
        let weights: Vec<f64> = (0..self.h_max()).map(|h| 0.5f64.powi(h as i32)).collect();
        let total: f64 = weights.iter().sum();
        let mut placed: Vec<Shape> = Vec::with_capacity(n);
        let mut placements = Vec::with_capacity(n);
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n);
        let max_attempts = 200 * n + 1000;
        let mut attempts = 0;
        while placed.len() < n {
            attempts += 1;
            if attempts > max_attempts {
                return Err(Error::Generator(format!("placed only {} of {n} shapes triangle-free", placed.len())));
            }
            let mut u = rng.random_range(0.0..total);
            let mut h = 0;
            while h + 1 < weights.len() && u >= weights[h] {
                u -= weights[h];
                h += 1;
            }
            let base = if rng.random_bool(0.5) { &self.trapezoids[h] } else { &self.squares[h] };
            let tx = rng.random_range(0..=grid);
            let ty = rng.random_range(0..=grid);
            let t = vec![qr(tx, 1024), qr(ty, 1024)];
            let shape = base.translate(&t)?;
            let mut hits = Vec::new();
            for (j, other) in placed.iter().enumerate() {
                if shapes_intersect(&shape, other)? {
                    hits.push(j);
                }
            }
            if hits.iter().any(|&a| hits.iter().any(|&b| adj[a].contains(&b))) {
                continue;
            }
            let v = placed.len();
            for &j in &hits {
                adj[j].push(v);
            }
            adj.push(hits);
            placed.push(shape);
            placements.push(PlacedShape::new(base.clone(), t)?);
        }
        let mut b = InstanceBundle::new(
            Representation::new(placements)?,
            "sstar",
            json!({ "h_max": self.h_max(), "n": n }),
            Some(seed),
        );
        b.expected_graph = Some(Graph::from_edges(n, adj.iter().enumerate().flat_map(|(v, l)| l.iter().map(move |&u| (u, v))))?);
        b.expected_thinness = Some(2);
        b.finish(None)
    }
}

/// `m` translated L-shapes, each a union of two boxes, forming a 2-thin
/// `K_m`. The shapes are not convex, so tameness certification must reject
/// them.
pub fn lshape_clique(m: usize) -> Result<InstanceBundle> {
    at_least_one("m", m)?;
    let e = qr(1, 10);
    let a = q(m as i64);
    let vertical = BoxShape::new(vec![-e.clone(), -e.clone()], vec![e.clone(), &a + &e])?;
    let horizontal = BoxShape::new(vec![-e.clone(), -e.clone()], vec![&a + &e, e.clone()])?;
    let l = Shape::Union(BoxUnion::new(vec![vertical, horizontal])?);
    let placements =
        (0..m as i64).map(|i| PlacedShape::new(l.clone(), vec![q(i), q(-i)])).collect::<Result<Vec<_>>>()?;
    let mut b = InstanceBundle::new(Representation::new(placements)?, "lshape", json!({ "m": m }), None);
    b.expected_graph = Some(Graph::complete(m));
    b.expected_thinness = Some(2);
    b.finish(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AspectProfile {
    /// Extents uniform in `[1, 2]`.
    Bounded,
    /// Extents log-uniform in `[1, 1000]`, sorted per axis so the boxes
    /// are nested in size.
    HeavyTail,
}

impl std::str::FromStr for AspectProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bounded" => Ok(AspectProfile::Bounded),
            "heavy_tail" | "heavy-tail" => Ok(AspectProfile::HeavyTail),
            other => Err(Error::InvalidParameter(format!("unknown aspect profile {other:?}"))),
        }
    }
}

const GRID: i64 = 1024;
const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut x = 0.0;
    while i > 0 {
        x += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    x
}

/// Largest number of boxes over one point of `cand`, counting `cand`.
/// Closed boxes, so touching counts; the deepest point can be taken with
/// every coordinate at some box's low end.
fn local_depth<'a>(cand: &BoxShape, others: impl Iterator<Item = &'a BoxShape>) -> usize {
    let d = cand.dim();
    let clipped: Vec<(Vec<Q>, Vec<Q>)> = others
        .filter(|b| b.intersects(cand))
        .map(|b| {
            let lo = (0..d).map(|a| b.lo()[a].clone().max(cand.lo()[a].clone())).collect();
            let hi = (0..d).map(|a| b.hi()[a].clone().min(cand.hi()[a].clone())).collect();
            (lo, hi)
        })
        .collect();
    let mut best = 0;
    let mut idx = vec![0usize; d];
    if clipped.is_empty() {
        return 1;
    }
    loop {
        let p: Vec<&Q> = (0..d).map(|a| &clipped[idx[a]].0[a]).collect();
        let depth = clipped.iter().filter(|(lo, hi)| (0..d).all(|a| lo[a] <= *p[a] && *p[a] <= hi[a])).count();
        best = best.max(depth);
        let mut a = 0;
        while a < d {
            idx[a] += 1;
            if idx[a] < clipped.len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == d {
            break;
        }
    }
    best + 1
}

/// Smallest `s` with every pair of boxes `⊑_s`-comparable, from integer
/// extents on the placement grid. For a pair it is the smaller of
/// `∏a_i / ∏min(a_i, b_i)` and `∏b_i / ∏min(a_i, b_i)`.
fn integer_box_s_star(extents: &[Vec<i64>]) -> Q {
    let prod = |v: &[i64]| v.iter().map(|&x| x as u128).product::<u128>();
    let vols: Vec<u128> = extents.iter().map(|e| prod(e)).collect();
    let worst = (0..extents.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (1u128, 1u128);
            for j in i + 1..extents.len() {
                let overlap: u128 =
                    extents[i].iter().zip(&extents[j]).map(|(&a, &b)| a.min(b) as u128).product();
                let num = vols[i].min(vols[j]);
                // num / overlap > best.0 / best.1
                if num * best.1 > best.0 * overlap {
                    best = (num, overlap);
                }
            }
            best
        })
        .reduce(|| (1, 1), |a, b| if a.0 * b.1 >= b.0 * a.1 { a } else { b });
    Q::new(worst.0.into(), worst.1.into())
}

/// Boxes whose extents follow `profile`, placed along a randomly shifted
/// Halton sequence in a window sized so the expected depth is about one.
///
/// With `max_thinness = Some(c)`, the window targets a density of `0.6c`, a
/// placement is skipped when it would put more than `c` boxes over one point
/// (checked exactly), and the sequence continues. Extents and positions lie
/// on a `1/1024` grid.
pub fn random_box_instance(
    n: usize,
    d: usize,
    profile: AspectProfile,
    seed: u64,
    max_thinness: Option<usize>,
) -> Result<InstanceBundle> {
    at_least_one("n", n)?;
    if !(1..=PRIMES.len()).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if max_thinness == Some(0) {
        return Err(Error::InvalidParameter("thinness cap must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extents: Vec<Vec<i64>> = match profile {
        AspectProfile::Bounded => (0..n).map(|_| (0..d).map(|_| rng.random_range(GRID..=2 * GRID)).collect()).collect(),
        AspectProfile::HeavyTail => {
            let ln = 1000f64.ln();
            let axes: Vec<Vec<i64>> = (0..d)
                .map(|_| {
                    let mut v: Vec<i64> = (0..n)
                        .map(|_| ((rng.random_range(0.0..1.0f64) * ln).exp() * GRID as f64).round() as i64)
                        .map(|x| x.clamp(GRID, 1000 * GRID))
                        .collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            (0..n).map(|i| (0..d).map(|a| axes[a][i]).collect()).collect()
        }
    };
    let shift: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
    let skip: u64 = rng.random_range(0..1 << 20);
    let total_vol: f64 = extents.iter().map(|e| e.iter().map(|&x| x as f64 / GRID as f64).product::<f64>()).sum();
    let density = match max_thinness {
        Some(c) => 0.6 * c as f64,
        None => 1.0,
    };
    let cell = extents.iter().flatten().copied().max().unwrap_or(GRID) as f64 / GRID as f64;
    let side = (total_vol / density).powf(1.0 / d as f64).max(2.0 * cell);

    let mut placed: Vec<BoxShape> = Vec::with_capacity(n);
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let cells_of = |b: &BoxShape| -> Vec<Vec<i64>> {
        let lo: Vec<i64> = b.lo().iter().map(|x| (q_to_f64(x) / cell).floor() as i64).collect();
        let hi: Vec<i64> = b.hi().iter().map(|x| (q_to_f64(x) / cell).floor() as i64).collect();
        let mut out = vec![Vec::with_capacity(d)];
        for a in 0..d {
            out = out.into_iter().flat_map(|p| (lo[a]..=hi[a]).map(move |c| [p.clone(), vec![c]].concat())).collect();
        }
        out
    };
    let max_attempts = 200 * n as u64 + 1000;
    let mut idx = skip;
    let mut slots: Vec<Option<PlacedShape>> = vec![None; n];
    // Largest first, so big boxes are not squeezed out by small ones.
    let vol = |e: &[i64]| e.iter().map(|&x| x as u128).product::<u128>();
    let mut by_size: Vec<usize> = (0..n).collect();
    by_size.sort_by(|&a, &b| vol(&extents[b]).cmp(&vol(&extents[a])).then(a.cmp(&b)));
    for (i, &id) in by_size.iter().enumerate() {
        let ext = &extents[id];
        let ext_q: Vec<Q> = ext.iter().map(|&x| qr(x, GRID)).collect();
        let shape = BoxShape::from_extents(&ext_q)?;
        loop {
            if idx - skip > max_attempts {
                return Err(Error::Generator(format!("placed only {i} of {n} boxes under the thinness cap")));
            }
            idx += 1;
            let lo: Vec<Q> = (0..d)
                .map(|a| {
                    let u = (radical_inverse(idx, PRIMES[a]) + shift[a]).fract();
                    qr((u * side * GRID as f64).round() as i64, GRID)
                })
                .collect();
            let cand = shape.translate(&lo);
            let cells = cells_of(&cand);
            if let Some(c) = max_thinness {
                let mut near: Vec<usize> =
                    cells.iter().filter_map(|k| buckets.get(k)).flatten().copied().collect();
                near.sort_unstable();
                near.dedup();
                if local_depth(&cand, near.iter().map(|&j| &placed[j])) > c {
                    continue;
                }
            }
            for k in cells {
                buckets.entry(k).or_default().push(i);
            }
            placed.push(cand);
            slots[id] = Some(PlacedShape::new(Shape::Box(shape), lo)?);
            break;
        }
    }
    let placements: Vec<PlacedShape> = slots.into_iter().map(|p| p.expect("every box placed")).collect();
    let s_star = if d <= 3 {
        integer_box_s_star(&extents)
    } else {
        let shapes: Vec<Shape> = placements.iter().map(|p| p.shape.clone()).collect();
        match comparability_scan(&shapes, &Q::one())?.s_star {
            Scalar::Exact(s) => s,
            Scalar::Float(f) => f64_to_q(f)?,
        }
    };
    let mut b = InstanceBundle::new(
        Representation::new(placements)?,
        "random-box",
        json!({ "n": n, "d": d, "profile": profile, "max_thinness": max_thinness }),
        Some(seed),
    );
    b.expected_thinness = max_thinness;
    b.finish(Some(Scalar::Exact(s_star)))
}
