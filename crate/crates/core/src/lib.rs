//! Geometric intersection graphs of translated convex shapes.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: boxes (exact rationals) and convex polytopes (floats, `d <= 3`),
//!   their measures, envelopes and intersection predicates.
//! - [`relations`]: the comparability relations `<=_k`, `<=_{k,s}` and the
//!   volume-overlap relation `⊑_s`, plus executable checks of the lemmas that
//!   connect them.
//! - [`graph`]: intersection graphs, thinness, tameness certificates, the box
//!   projection dichotomy and strong products.
//! - [`coloring`]: reach sets, strong coloring number profiles, the volume
//!   ordering and the `δ r^d` bound.
//! - [`separators`]: balanced separator verification, an exact oracle, two
//!   constructive heuristics and the scaling experiment.
//! - [`generators`]: parameterised instance constructions.
//! - [`harness`]: instance files, experiment orchestration and reports.

pub mod coloring;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod harness;
pub mod io;
pub(crate) mod lp;
pub mod num;
pub mod relations;
pub mod separators;

pub use coloring::{ColoringProfile, GeneralizedRep, Ordering};
pub use error::{Error, Result};
pub use generators::InstanceBundle;
pub use geometry::{BoxShape, ConvexPolytope, Parallelepiped, PlacedShape, Shape};
pub use graph::{Graph, Representation, TamenessCertificate};
pub use num::{Scalar, Q};
pub use relations::{ComparabilityReport, IntervalFamily, TriBool};
pub use separators::{ScalingFit, SeparatorResult};
