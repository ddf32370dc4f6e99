//! Graphs, intersection representations and the checks defined on them.

mod dichotomy;
mod product;
mod tame;
mod thinness;

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bboxes_overlap, PlacedShape, Shape};
use crate::num::EPS;

pub use dichotomy::{boxes_dichotomy, verify_dichotomy, Dichotomy};
pub use product::{product_representation, strong_product, ProductMode};
pub(crate) use tame::{canonical, Canon};
pub use tame::{check_tame, check_tame_with, CertStatus, TameFailure, TamenessCertificate};
pub use thinness::{thinness, thinness_brute_force, Thinness};

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson { n: self.n(), edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = GraphJson::deserialize(d)?;
        Graph::from_edges(g.n, g.edges.iter().map(|e| (e[0], e[1]))).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph, rejecting self-loops and out-of-range endpoints and
    /// merging parallel edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        Graph { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|l| l.binary_search(&v).is_ok())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn complete(n: usize) -> Self {
        Graph { adj: (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect() }
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        let mut e: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            e.push((n - 1, 0));
        }
        Graph::from_edges(n, e).expect("valid cycle")
    }

    /// Star with center `0` and leaves `1..=r`.
    pub fn star(r: usize) -> Self {
        Graph::from_edges(r + 1, (1..=r).map(|i| (0, i))).expect("valid star")
    }

    /// `w × h` grid; vertex `(x, y)` has id `y·w + x`.
    pub fn grid(w: usize, h: usize) -> Self {
        let id = |x: usize, y: usize| y * w + x;
        let right = (0..h).flat_map(|y| (1..w).map(move |x| (id(x - 1, y), id(x, y))));
        let down = (1..h).flat_map(|y| (0..w).map(move |x| (id(x, y - 1), id(x, y))));
        Graph::from_edges(w * h, right.chain(down)).expect("valid grid")
    }

    /// Connected components of the graph with `removed` vertices deleted,
    /// each sorted, ordered by smallest member.
    pub fn components_without(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = removed.to_vec();
        seen.resize(n, false);
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_without(&vec![false; self.n()])
    }

    /// BFS distances from `source` within `allowed`; `usize::MAX` when
    /// unreachable.
    pub fn bfs_within(&self, source: usize, allowed: &[bool]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if allowed[w] && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut l: Vec<usize> =
                    self.adj[v].iter().filter(|&&w| index[w] != usize::MAX).map(|&w| index[w]).collect();
                l.sort_unstable();
                l
            })
            .collect();
        Graph { adj }
    }
}

/// Intersection representation: vertex `v` is mapped to `placements[v]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    dim: usize,
    placements: Vec<PlacedShape>,
}

impl Representation {
    pub fn new(placements: Vec<PlacedShape>) -> Result<Self> {
        let Some(first) = placements.first() else {
            return Err(Error::InvalidParameter("representation without vertices".into()));
        };
        let dim = first.dim();
        if let Some(p) = placements.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
        }
        Ok(Representation { dim, placements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn placements(&self) -> &[PlacedShape] {
        &self.placements
    }

    pub fn placement(&self, v: usize) -> Result<&PlacedShape> {
        self.placements.get(v).ok_or(Error::UnknownVertex(v))
    }

    /// Translated shapes, indexed by vertex.
    pub fn realized(&self) -> Vec<Shape> {
        self.placements.par_iter().map(PlacedShape::realize).collect()
    }

    pub fn all_boxes(&self) -> bool {
        self.placements.iter().all(|p| matches!(p.shape, Shape::Box(_)))
    }
}

/// Intersection graph of a representation under closed-set semantics.
///
/// Boxes are swept along the first axis on exact coordinate ranks; other
/// shapes are tested pairwise after a bounding-box filter.
pub fn build_intersection_graph(r: &Representation) -> Result<Graph> {
    let shapes = r.realized();
    if r.all_boxes() {
        let boxes: Vec<_> = shapes.iter().map(|s| s.as_box().expect("all boxes").clone()).collect();
        return Ok(box_sweep_graph(&boxes));
    }
    pairwise_graph(&shapes)
}

/// Reference O(n²) construction used to validate the sweep.
pub fn build_intersection_graph_pairwise(r: &Representation) -> Result<Graph> {
    pairwise_graph(&r.realized())
}

fn pairwise_graph(shapes: &[Shape]) -> Result<Graph> {
    let n = shapes.len();
    let boxes: Vec<_> = shapes.par_iter().map(Shape::bbox_f64).collect();
    let polys: Vec<Option<crate::geometry::ConvexPolytope>> = shapes
        .par_iter()
        .map(|s| match s {
            Shape::Polytope(p) => Some(p.clone()),
            _ => None,
        })
        .collect();
    let adj: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|u| -> Result<Vec<usize>> {
            let mut l = Vec::new();
            for v in 0..n {
                if v == u {
                    continue;
                }
                let eps = 1e3 * EPS * (1.0 + boxes[u].1.iter().chain(&boxes[v].1).fold(0.0f64, |m, x| m.max(x.abs())));
                if !bboxes_overlap(&boxes[u], &boxes[v], eps) {
                    continue;
                }
                let hit = match (&polys[u], &polys[v]) {
                    (Some(a), Some(b)) => crate::geometry::polytopes_intersect(a, b)?.is_some(),
                    _ => crate::geometry::shapes_intersect(&shapes[u], &shapes[v])?,
                };
                if hit {
                    l.push(v);
                }
            }
            Ok(l)
        })
        .collect::<Result<_>>()?;
    Ok(Graph::from_sorted_adjacency(adj))
}

/// Per-axis integer ranks of box coordinates; comparisons on ranks agree
/// with comparisons on the exact coordinates.
pub(crate) fn coordinate_ranks(boxes: &[crate::geometry::BoxShape]) -> Vec<Vec<(usize, usize)>> {
    let n = boxes.len();
    let d = boxes.first().map_or(0, |b| b.dim());
    let mut ranks = vec![vec![(0usize, 0usize); d]; n];
    for axis in 0..d {
        let mut coords: Vec<&crate::num::Q> =
            boxes.iter().flat_map(|b| [&b.lo()[axis], &b.hi()[axis]]).collect();
        coords.sort();
        coords.dedup();
        for (i, b) in boxes.iter().enumerate() {
            let lo = coords.binary_search(&&b.lo()[axis]).expect("present");
            let hi = coords.binary_search(&&b.hi()[axis]).expect("present");
            ranks[i][axis] = (lo, hi);
        }
    }
    ranks
}

fn box_sweep_graph(boxes: &[crate::geometry::BoxShape]) -> Graph {
    let n = boxes.len();
    let ranks = coordinate_ranks(boxes);
    let d = boxes.first().map_or(0, |b| b.dim());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (ranks[i][0].0, i));
    let mut active: Vec<usize> = Vec::new();
    let mut adj = vec![Vec::new(); n];
    for &i in &order {
        let start = ranks[i][0].0;
        // Closed intervals: a box ending exactly at `start` still touches.
        active.retain(|&j| ranks[j][0].1 >= start);
        for &j in &active {
            if (1..d).all(|a| ranks[i][a].0 <= ranks[j][a].1 && ranks[j][a].0 <= ranks[i][a].1) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        active.push(i);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    Graph::from_sorted_adjacency(adj)
}

#[cfg(test)]
mod tests;
