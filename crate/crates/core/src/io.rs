//! JSON forms of shapes and representations.
//!
//! Box coordinates are written as `"p/q"` strings and read from either
//! strings or JSON numbers. Polytopes are written as their vertex lists.

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{BoxShape, BoxUnion, ConvexPolytope, PlacedShape, Point, Shape};
use crate::graph::Representation;
use crate::num::{serde_q, Q};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxJson {
    #[serde(with = "serde_q::vec")]
    pub lo: Vec<Q>,
    #[serde(with = "serde_q::vec")]
    pub hi: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeJson {
    Box(BoxJson),
    Polytope { vertices: Vec<Point> },
    /// Non-convex control shape.
    Union { parts: Vec<BoxJson> },
}

fn box_json(b: &BoxShape) -> BoxJson {
    BoxJson { lo: b.lo().to_vec(), hi: b.hi().to_vec() }
}

fn box_from(b: &BoxJson) -> Result<BoxShape> {
    BoxShape::new(b.lo.clone(), b.hi.clone())
}

impl From<&Shape> for ShapeJson {
    fn from(s: &Shape) -> Self {
        match s {
            Shape::Box(b) => ShapeJson::Box(box_json(b)),
            Shape::Polytope(p) => ShapeJson::Polytope { vertices: p.vertices().to_vec() },
            Shape::Union(u) => ShapeJson::Union { parts: u.parts().iter().map(box_json).collect() },
        }
    }
}

impl TryFrom<&ShapeJson> for Shape {
    type Error = Error;

    fn try_from(s: &ShapeJson) -> Result<Shape> {
        Ok(match s {
            ShapeJson::Box(b) => Shape::Box(box_from(b)?),
            ShapeJson::Polytope { vertices } => {
                let dim = vertices.first().map_or(0, Vec::len);
                Shape::Polytope(ConvexPolytope::from_points(dim, vertices.clone())?)
            }
            ShapeJson::Union { parts } => Shape::Union(BoxUnion::new(parts.iter().map(box_from).collect::<Result<_>>()?)?),
        })
    }
}

pub fn shape_from_json_str(s: &str) -> Result<Shape> {
    Shape::try_from(&serde_json::from_str::<ShapeJson>(s)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementJson {
    pub vertex: usize,
    /// Index into the shape table.
    pub shape: usize,
    #[serde(with = "serde_q::vec")]
    pub translation: Vec<Q>,
}

/// Shape table plus placements; identical shapes are stored once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub dim: usize,
    pub shapes: Vec<ShapeJson>,
    pub placements: Vec<PlacementJson>,
}

impl From<&Representation> for RepresentationJson {
    fn from(r: &Representation) -> Self {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut shapes = Vec::new();
        let placements = r
            .placements()
            .iter()
            .enumerate()
            .map(|(v, p)| {
                let js = ShapeJson::from(&p.shape);
                let key = serde_json::to_string(&js).expect("shape serializes");
                let shape = *index.entry(key).or_insert_with(|| {
                    shapes.push(js);
                    shapes.len() - 1
                });
                PlacementJson { vertex: v, shape, translation: p.translation.clone() }
            })
            .collect();
        RepresentationJson { dim: r.dim(), shapes, placements }
    }
}

impl TryFrom<&RepresentationJson> for Representation {
    type Error = Error;

    fn try_from(j: &RepresentationJson) -> Result<Representation> {
        let shapes: Vec<Shape> = j.shapes.iter().map(Shape::try_from).collect::<Result<_>>()?;
        let n = j.placements.len();
        let mut slots: Vec<Option<PlacedShape>> = vec![None; n];
        for p in &j.placements {
            let shape = shapes
                .get(p.shape)
                .ok_or_else(|| Error::Parse(format!("placement of vertex {} names unknown shape {}", p.vertex, p.shape)))?;
            let slot = slots.get_mut(p.vertex).ok_or(Error::UnknownVertex(p.vertex))?;
            if slot.is_some() {
                return Err(Error::Parse(format!("vertex {} placed twice", p.vertex)));
            }
            *slot = Some(PlacedShape::new(shape.clone(), p.translation.clone())?);
        }
        let placements: Vec<PlacedShape> = slots.into_iter().map(|s| s.expect("every slot filled")).collect();
        let r = Representation::new(placements)?;
        if r.dim() != j.dim {
            return Err(Error::DimensionMismatch { expected: j.dim, got: r.dim() });
        }
        Ok(r)
    }
}

impl Serialize for Representation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepresentationJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Representation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RepresentationJson::deserialize(d)?;
        Representation::try_from(&j).map_err(serde::de::Error::custom)
    }
}
