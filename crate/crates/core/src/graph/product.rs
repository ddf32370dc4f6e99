use serde::{Deserialize, Serialize};

use super::{Graph, Representation};
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolytope, PlacedShape, Point, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMode {
    /// Vertex `(a, b)` gets `φ1(a) × φ2(b)`; represents the strong product.
    Product,
    /// Vertex `v` gets `φ1(v) × φ2(v)`; represents the edge intersection.
    Conjunction,
}

/// Strong product; vertex `(a, b)` has id `a * n2 + b`.
pub fn strong_product(g1: &Graph, g2: &Graph) -> Graph {
    let (n1, n2) = (g1.n(), g2.n());
    let closed = |g: &Graph, v: usize| {
        let mut l = g.neighbors(v).to_vec();
        l.push(v);
        l.sort_unstable();
        l
    };
    let adj = (0..n1 * n2)
        .map(|id| {
            let (a, b) = (id / n2, id % n2);
            let nb = closed(g2, b);
            let mut l = Vec::new();
            for x in closed(g1, a) {
                for &y in &nb {
                    if (x, y) != (a, b) {
                        l.push(x * n2 + y);
                    }
                }
            }
            l
        })
        .collect();
    Graph::from_sorted_adjacency(adj)
}

fn shape_product(a: &Shape, b: &Shape) -> Result<Shape> {
    if let (Shape::Box(x), Shape::Box(y)) = (a, b) {
        return Ok(Shape::Box(x.product(y)));
    }
    let d = a.dim() + b.dim();
    if d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let (pa, pb) = (a.to_polytope()?, b.to_polytope()?);
    let pts: Vec<Point> = pa
        .vertices()
        .iter()
        .flat_map(|u| pb.vertices().iter().map(move |v| u.iter().chain(v).copied().collect()))
        .collect();
    Ok(Shape::Polytope(ConvexPolytope::from_points(d, pts)?))
}

fn placed_product(a: &PlacedShape, b: &PlacedShape) -> Result<PlacedShape> {
    let t = a.translation.iter().chain(&b.translation).cloned().collect();
    PlacedShape::new(shape_product(&a.shape, &b.shape)?, t)
}

/// Cartesian products of shapes in dimension `d1 + d2`.
///
/// Box pairs stay exact boxes; any other pair becomes a polytope, which needs
/// `d1 + d2 <= 3`.
pub fn product_representation(r1: &Representation, r2: &Representation, mode: ProductMode) -> Result<Representation> {
    let placements = match mode {
        ProductMode::Product => r1
            .placements()
            .iter()
            .flat_map(|a| r2.placements().iter().map(move |b| placed_product(a, b)))
            .collect::<Result<Vec<_>>>()?,
        ProductMode::Conjunction => {
            if r1.len() != r2.len() {
                return Err(Error::InvalidParameter(format!(
                    "conjunction needs equal vertex sets, got {} and {}",
                    r1.len(),
                    r2.len()
                )));
            }
            r1.placements().iter().zip(r2.placements()).map(|(a, b)| placed_product(a, b)).collect::<Result<_>>()?
        }
    };
    Representation::new(placements)
}
