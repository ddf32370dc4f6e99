use std::collections::HashMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{thinness, Representation};
use crate::error::Result;
use crate::geometry::{Point, Shape};
use crate::num::{Scalar, Q};
use crate::relations::{comparability_scan_with, ProbeBudget, TriBool};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    /// Every sub-check ran on exact rationals.
    Exact,
    /// Some sub-check relied on probes or samples.
    SampledOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TameFailure {
    /// A point covered by more than `c` shapes.
    Thinness { point: Point, vertices: Vec<usize> },
    NonConvex { vertex: usize },
    /// Neither shape is `⊑_s` the other; `witness` is a bad point.
    Incomparable { pair: (usize, usize), witness: Option<Point> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TamenessCertificate {
    pub c: usize,
    pub s: Scalar,
    /// Measured maximum depth.
    pub thinness: usize,
    /// Smallest `s` making every distinct pair of convex shapes comparable.
    pub s_star: Option<Scalar>,
    pub status: CertStatus,
    pub certified: bool,
    pub failures: Vec<TameFailure>,
    /// Pairs whose comparability the probes could not decide.
    pub undecided: Vec<(usize, usize)>,
}

#[derive(PartialEq, Eq, Hash)]
pub(crate) enum Canon {
    Box(Vec<Q>),
    Polytope(Vec<u64>),
    Other(usize),
}

/// Shape up to translation.
pub(crate) fn canonical(v: usize, s: &Shape) -> Canon {
    match s {
        Shape::Box(b) => Canon::Box(b.extents()),
        Shape::Polytope(p) => {
            let o = &p.vertices()[0];
            Canon::Polytope(p.vertices().iter().flat_map(|x| x.iter().zip(o).map(|(a, b)| (a - b).to_bits())).collect())
        }
        Shape::Union(_) => Canon::Other(v),
    }
}

pub fn check_tame(r: &Representation, c: usize, s: &Q) -> Result<TamenessCertificate> {
    check_tame_with(r, c, s, ProbeBudget::default())
}

/// Certifies that `r` is `c`-thin, convex and pairwise `⊑_s`-comparable.
/// Failures are reported in the certificate rather than as errors.
pub fn check_tame_with(r: &Representation, c: usize, s: &Q, budget: ProbeBudget) -> Result<TamenessCertificate> {
    let mut failures = Vec::new();
    let mut exact = r.all_boxes();

    let th = thinness(r)?;
    if th.c > c {
        failures.push(TameFailure::Thinness { point: th.witness.clone().unwrap_or_default(), vertices: th.members.clone() });
    }

    let mut reps: Vec<usize> = Vec::new();
    let mut seen: HashMap<Canon, usize> = HashMap::new();
    for (v, p) in r.placements().iter().enumerate() {
        if !p.shape.is_convex() {
            failures.push(TameFailure::NonConvex { vertex: v });
            continue;
        }
        seen.entry(canonical(v, &p.shape)).or_insert_with(|| {
            reps.push(v);
            reps.len() - 1
        });
    }

    let mut undecided = Vec::new();
    let mut s_star = None;
    if !reps.is_empty() {
        let shapes: Vec<Shape> = reps.iter().map(|&v| r.placements()[v].shape.clone()).collect();
        if reps.len() == 1 {
            s_star = Some(Scalar::Exact(Q::one()));
        } else {
            let scan = comparability_scan_with(&shapes, s, budget)?;
            for rep in &scan.reports {
                let pair = (reps[rep.pair.0], reps[rep.pair.1]);
                match &rep.verdict {
                    TriBool::Holds => {}
                    TriBool::FailsWithWitness(w) => {
                        failures.push(TameFailure::Incomparable { pair, witness: Some(w.clone()) })
                    }
                    TriBool::Unknown => undecided.push(pair),
                }
            }
            exact &= scan.s_star.is_exact();
            s_star = Some(scan.s_star);
        }
    }
    if !undecided.is_empty() {
        log::warn!("{} pairs left undecided by comparability probes", undecided.len());
        exact = false;
    }
    Ok(TamenessCertificate {
        c,
        s: Scalar::Exact(s.clone()),
        thinness: th.c,
        s_star,
        status: if exact { CertStatus::Exact } else { CertStatus::SampledOnly },
        certified: failures.is_empty(),
        failures,
        undecided,
    })
}
