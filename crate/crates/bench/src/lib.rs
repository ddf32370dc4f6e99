//! Shared fixtures for the benchmarks.

use tamesep_core::generators::{random_box_instance, AspectProfile};
use tamesep_core::InstanceBundle;

/// A seeded 2-thin random box instance.
pub fn boxes(n: usize, d: usize) -> InstanceBundle {
    random_box_instance(n, d, AspectProfile::Bounded, 17, Some(2)).expect("bench instance")
}
