//! Generalized coloring numbers and the conditions that bound them.

use std::collections::{HashMap, VecDeque};

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{contains_shape, intersection_point, volume, PlacedShape, Point, Shape};
use crate::graph::{canonical, thinness, Canon, CertStatus, Graph, Representation};
use crate::num::{q, q_pow, serde_q, Q};
use crate::relations::{le_k, sqsubseteq_s, TriBool};

/// Largest graph accepted by [`strong_coloring_number_exact`].
pub const EXACT_COL_CAP: usize = 9;

/// Linear order on `0..n`; `order[i]` is the vertex at position `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Ordering {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Ordering {
    type Error = Error;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        Ordering::new(order)
    }
}

impl From<Ordering> for Vec<usize> {
    fn from(o: Ordering) -> Self {
        o.order
    }
}

impl Ordering {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!("ordering is not a permutation of 0..{n}")));
            }
            position[v] = i;
        }
        Ok(Ordering { order, position })
    }

    pub fn identity(n: usize) -> Self {
        Ordering { order: (0..n).collect(), position: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// `u ≺ v`.
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }
}

fn check_ordering(g: &Graph, ord: &Ordering) -> Result<()> {
    if ord.len() != g.n() {
        return Err(Error::InvalidParameter(format!("ordering has {} vertices, graph has {}", ord.len(), g.n())));
    }
    Ok(())
}

/// For every `x ⪯ v`, the length of the shortest path from `v` to `x` whose
/// internal vertices all come after `v`, if at most `r`.
fn reach_lengths(g: &Graph, ord: &Ordering, r: usize, v: usize) -> Vec<(usize, usize)> {
    let pv = ord.position(v);
    let mut dist: HashMap<usize, usize> = HashMap::from([(v, 0)]);
    let mut best: HashMap<usize, usize> = HashMap::from([(v, 0)]);
    let mut queue = VecDeque::from([v]);
    while let Some(z) = queue.pop_front() {
        let dz = dist[&z];
        if dz + 1 > r {
            continue;
        }
        for &w in g.neighbors(z) {
            if ord.position(w) <= pv {
                best.entry(w).or_insert(dz + 1);
            } else if !dist.contains_key(&w) {
                dist.insert(w, dz + 1);
                queue.push_back(w);
            }
        }
    }
    best.into_iter().collect()
}

/// `L_{G,≺,r}(v)`, sorted.
pub fn reach_set(g: &Graph, ord: &Ordering, r: usize, v: usize) -> Result<Vec<usize>> {
    check_ordering(g, ord)?;
    if v >= g.n() {
        return Err(Error::UnknownVertex(v));
    }
    let mut out: Vec<usize> = reach_lengths(g, ord, r, v).into_iter().map(|(x, _)| x).collect();
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColEntry {
    pub r: usize,
    pub value: usize,
    pub argmax: usize,
}

/// `col_{≺,r}` for `r = 1..=r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringProfile {
    pub entries: Vec<ColEntry>,
}

impl ColoringProfile {
    pub fn values(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn value(&self, r: usize) -> Option<usize> {
        self.entries.iter().find(|e| e.r == r).map(|e| e.value)
    }

    /// Radii where `col_{≺,r} > δ r^d`.
    pub fn bound_violations(&self, delta: &Q, d: usize) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| q(e.value as i64) > col_bound(delta, d, e.r))
            .map(|e| e.r)
            .collect()
    }
}

pub fn col_profile(g: &Graph, ord: &Ordering, r_max: usize) -> Result<ColoringProfile> {
    check_ordering(g, ord)?;
    if r_max == 0 {
        return Err(Error::InvalidParameter("r_max must be at least 1".into()));
    }
    if g.n() == 0 {
        return Err(Error::InvalidParameter("empty graph".into()));
    }
    // counts[v][r] = |L_r(v)|
    let counts: Vec<Vec<usize>> = (0..g.n())
        .into_par_iter()
        .map(|v| {
            let mut hist = vec![0usize; r_max + 1];
            for (_, len) in reach_lengths(g, ord, r_max, v) {
                hist[len] += 1;
            }
            let mut acc = 0;
            hist.iter()
                .map(|h| {
                    acc += h;
                    acc
                })
                .collect()
        })
        .collect();
    let entries = (1..=r_max)
        .map(|r| {
            let (argmax, value) = counts
                .iter()
                .enumerate()
                .map(|(v, c)| (v, c[r]))
                .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
            ColEntry { r, value, argmax }
        })
        .collect();
    Ok(ColoringProfile { entries })
}

pub fn strong_coloring_number_exact(g: &Graph, r: usize) -> Result<(usize, Ordering)> {
    strong_coloring_number_exact_with_cap(g, r, EXACT_COL_CAP)
}

/// `col_r(G)` by search over orderings built from the back.
///
/// `|L_r(v)|` depends only on which vertices come after `v`, so the best
/// maximum over a suffix set is memoised per subset.
pub fn strong_coloring_number_exact_with_cap(g: &Graph, r: usize, cap: usize) -> Result<(usize, Ordering)> {
    let n = g.n();
    if n > cap || n >= 63 {
        return Err(Error::SizeCap { what: "exact coloring number", n, cap });
    }
    if n == 0 {
        return Ok((0, Ordering::identity(0)));
    }
    // Reach count of v when exactly the vertices of `after` follow it.
    let reach = |v: usize, after: u64| -> usize {
        let mut dist: HashMap<usize, usize> = HashMap::from([(v, 0)]);
        let mut seen: u64 = 1 << v;
        let mut queue = VecDeque::from([v]);
        while let Some(z) = queue.pop_front() {
            let dz = dist[&z];
            if dz + 1 > r {
                continue;
            }
            for &w in g.neighbors(z) {
                if after >> w & 1 == 1 {
                    if !dist.contains_key(&w) {
                        dist.insert(w, dz + 1);
                        queue.push_back(w);
                    }
                } else {
                    seen |= 1 << w;
                }
            }
        }
        seen.count_ones() as usize
    };
    let full: u64 = (1u64 << n) - 1;
    // best[s] = min over orderings of the suffix set s of the max reach count.
    let mut best = vec![usize::MAX; 1 << n];
    let mut first = vec![0usize; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        for v in 0..n {
            if s >> v & 1 == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            if best[rest as usize] >= best[s as usize] {
                continue;
            }
            let cost = best[rest as usize].max(reach(v, rest));
            if cost < best[s as usize] {
                best[s as usize] = cost;
                first[s as usize] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = first[s as usize];
        order.push(v);
        s &= !(1 << v);
    }
    Ok((best[full as usize], Ordering::new(order)?))
}

/// Vertices by non-increasing volume, ties by id.
pub fn volume_ordering(r: &Representation) -> Result<Ordering> {
    let vols: Vec<_> = r.placements().iter().map(|p| volume(&p.shape)).collect();
    let mut order: Vec<usize> = (0..r.len()).collect();
    order.sort_by(|&a, &b| vols[b].compare(&vols[a]).then(a.cmp(&b)));
    Ordering::new(order)
}

/// `2 c s (2k + 1)^d d^d`.
pub fn delta_bound(c: &Q, s: &Q, d: usize, k: &Q) -> Result<Q> {
    for (name, x) in [("c", c), ("s", s), ("k", k)] {
        if *x < Q::one() {
            return Err(Error::InvalidParameter(format!("{name} must be >= 1, got {x}")));
        }
    }
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let dq = q(d as i64);
    Ok(q(2) * c * s * q_pow(&(q(2) * k + q(1)), d as u32) * q_pow(&dq, d as u32))
}

/// `δ r^d`, the bound on `col_{≺,r}`.
pub fn col_bound(delta: &Q, d: usize, r: usize) -> Q {
    delta * q_pow(&q(r as i64), d as u32)
}

/// Inner and outer shapes per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedRep {
    pub inner: Vec<PlacedShape>,
    pub outer: Vec<PlacedShape>,
}

impl GeneralizedRep {
    pub fn new(inner: Vec<PlacedShape>, outer: Vec<PlacedShape>) -> Result<Self> {
        if inner.len() != outer.len() {
            return Err(Error::InvalidParameter(format!("{} inner vs {} outer shapes", inner.len(), outer.len())));
        }
        let d = inner.first().map_or(0, PlacedShape::dim);
        if let Some(p) = inner.iter().chain(&outer).find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
        }
        Ok(GeneralizedRep { inner, outer })
    }

    /// `ι = ω = φ`.
    pub fn from_representation(r: &Representation) -> Self {
        GeneralizedRep { inner: r.placements().to_vec(), outer: r.placements().to_vec() }
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub vertices: Vec<usize>,
    pub point: Option<Point>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub passed: bool,
    pub status: CertStatus,
    pub violations: Vec<Violation>,
}

impl ConditionCheck {
    fn new(violations: Vec<Violation>, exact: bool) -> Self {
        ConditionCheck {
            passed: violations.is_empty(),
            status: if exact { CertStatus::Exact } else { CertStatus::SampledOnly },
            violations,
        }
    }
}

/// Per-condition outcome of [`verify_generalized_conditions`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub c: usize,
    #[serde(with = "serde_q")]
    pub k: Q,
    #[serde(with = "serde_q")]
    pub s: Q,
    /// Outer shapes convex and containing the inner ones.
    pub containment: ConditionCheck,
    /// Inner family `c`-thin.
    pub thinness: ConditionCheck,
    /// `ω(v) ≤_k ω(u)` and `ω(v) ⊑_s ι(u)` whenever `u ≺ v`.
    pub comparability: ConditionCheck,
    /// `ω(v) ∩ ι(u) ≠ ∅` for every edge with `u ≺ v`.
    pub edges: ConditionCheck,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        [&self.containment, &self.thinness, &self.comparability, &self.edges].iter().all(|c| c.passed)
    }
}

fn violation(vertices: Vec<usize>, point: Option<Point>, detail: impl Into<String>) -> Violation {
    Violation { vertices, point, detail: detail.into() }
}

/// Checks the four hypotheses of the `δ r^d` coloring bound.
pub fn verify_generalized_conditions(
    gr: &GeneralizedRep,
    g: &Graph,
    ord: &Ordering,
    c: usize,
    k: &Q,
    s: &Q,
) -> Result<ConditionReport> {
    let n = g.n();
    if gr.len() != n {
        return Err(Error::InvalidParameter(format!("{} shapes for {n} vertices", gr.len())));
    }
    check_ordering(g, ord)?;
    let inner: Vec<Shape> = gr.inner.par_iter().map(PlacedShape::realize).collect();
    let outer: Vec<Shape> = gr.outer.par_iter().map(PlacedShape::realize).collect();

    let mut exact = true;
    let mut bad = Vec::new();
    for v in 0..n {
        if !outer[v].is_convex() {
            bad.push(violation(vec![v], None, "outer shape is not convex"));
            continue;
        }
        exact &= matches!((&outer[v], &inner[v]), (Shape::Box(_), Shape::Box(_)));
        match contains_shape(&outer[v], &inner[v]) {
            Ok(true) => {}
            Ok(false) => bad.push(violation(vec![v], None, "inner shape leaves outer shape")),
            Err(e) => bad.push(violation(vec![v], None, e.to_string())),
        }
    }
    let containment = ConditionCheck::new(bad, exact);

    let th = thinness(&Representation::new(gr.inner.clone())?)?;
    let thin_bad = if th.c > c {
        vec![violation(th.members.clone(), th.witness.clone(), format!("point covered {} times", th.c))]
    } else {
        Vec::new()
    };
    let thin = ConditionCheck::new(thin_bad, th.status == CertStatus::Exact);

    let comparability = comparability_condition(gr, ord, k, s);

    let mut bad = Vec::new();
    let mut exact = true;
    for (a, b) in g.edges() {
        let (u, v) = if ord.precedes(a, b) { (a, b) } else { (b, a) };
        exact &= matches!((&outer[v], &inner[u]), (Shape::Box(_), Shape::Box(_)));
        match intersection_point(&gr.outer[v], &gr.inner[u]) {
            Ok(Some(_)) => {}
            Ok(None) => bad.push(violation(vec![u, v], None, format!("outer({v}) misses inner({u})"))),
            Err(e) => bad.push(violation(vec![u, v], None, e.to_string())),
        }
    }
    let edges = ConditionCheck::new(bad, exact);

    Ok(ConditionReport { c, k: k.clone(), s: s.clone(), containment, thinness: thin, comparability, edges })
}

/// Both relations are translation invariant, so pairs are checked once per
/// pair of distinct shapes.
fn comparability_condition(gr: &GeneralizedRep, ord: &Ordering, k: &Q, s: &Q) -> ConditionCheck {
    let n = gr.len();
    let mut classes: HashMap<Canon, usize> = HashMap::new();
    let mut reps: Vec<&Shape> = Vec::new();
    // Unions in the two families get distinct keys via the offset ids.
    let mut class_ids = Vec::with_capacity(2 * n);
    for (v, p) in gr.outer.iter().chain(&gr.inner).enumerate() {
        let next = reps.len();
        let id = *classes.entry(canonical(v, &p.shape)).or_insert(next);
        if id == next {
            reps.push(&p.shape);
        }
        class_ids.push(id);
    }
    let (outer, inner) = class_ids.split_at(n);

    // (class of ω(v), class of ω(u) or ι(u), which relation) -> verdict
    let mut needed: Vec<(usize, usize, bool)> = Vec::new();
    for (pos_v, &v) in ord.order().iter().enumerate() {
        for &u in &ord.order()[..pos_v] {
            needed.push((outer[v], outer[u], true));
            needed.push((outer[v], inner[u], false));
        }
    }
    needed.sort_unstable();
    needed.dedup();
    let verdicts: HashMap<(usize, usize, bool), std::result::Result<TriBool, String>> = needed
        .par_iter()
        .map(|&(a, b, is_le)| {
            let res = if a == b && is_le {
                Ok(TriBool::Holds)
            } else if is_le {
                le_k(reps[a], reps[b], k)
            } else {
                sqsubseteq_s(reps[a], reps[b], s)
            };
            ((a, b, is_le), res.map_err(|e| e.to_string()))
        })
        .collect();

    let mut bad = Vec::new();
    let mut exact = true;
    for (pos_v, &v) in ord.order().iter().enumerate() {
        for &u in &ord.order()[..pos_v] {
            for (b, is_le, name) in [(outer[u], true, "outer <=_k outer"), (inner[u], false, "outer ⊑_s inner")] {
                match &verdicts[&(outer[v], b, is_le)] {
                    Ok(TriBool::Holds) => {}
                    Ok(TriBool::Unknown) => exact = false,
                    Ok(TriBool::FailsWithWitness(w)) => {
                        bad.push(violation(vec![u, v], Some(w.clone()), format!("{name} fails for ({v}, {u})")))
                    }
                    Err(e) => bad.push(violation(vec![u, v], None, e.clone())),
                }
            }
        }
    }
    exact &= reps.iter().all(|s| matches!(s, Shape::Box(_)));
    ConditionCheck::new(bad, exact)
}

#[cfg(test)]
mod tests;
