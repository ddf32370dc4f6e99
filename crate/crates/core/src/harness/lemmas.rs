//! Seeded property suites for the relation lemmas, the box dichotomy and the
//! interval bound.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::derive_seed;
use crate::error::{Error, Result};
use crate::geometry::{volume, BoxShape, Shape};
use crate::graph::{boxes_dichotomy, verify_dichotomy};
use crate::num::{q, qr, Q};
use crate::relations::{
    combip_check, le_ks, minimal_reach, required_s, verify_cmp, verify_rel1, verify_rel2, CombipOutcome, Interval,
    IntervalFamily, ProbeBudget, TriBool,
};

/// Failure messages kept per suite.
const MAX_EXAMPLES: usize = 5;

fn default_dims() -> Vec<usize> {
    vec![1, 2, 3]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaSuiteConfig {
    pub seed: u64,
    /// Random box pairs per dimension for each relation suite.
    pub pairs_per_dim: usize,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    pub dichotomy_families: usize,
    pub combip_pairs: usize,
}

impl LemmaSuiteConfig {
    pub fn new(seed: u64, pairs_per_dim: usize, dichotomy_families: usize, combip_pairs: usize) -> Self {
        LemmaSuiteConfig { seed, pairs_per_dim, dims: default_dims(), dichotomy_families, combip_pairs }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&d) = self.dims.iter().find(|&&d| !(1..=3).contains(&d)) {
            return Err(Error::UnsupportedDimension(d));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteCount {
    pub suite: String,
    pub d: Option<usize>,
    pub checked: usize,
    /// Cases whose premise held, so the conclusion was actually tested.
    pub premise_held: usize,
    pub violations: usize,
    /// Cases that could not be run.
    pub errors: usize,
    pub examples: Vec<String>,
}

impl SuiteCount {
    pub fn passed(&self) -> usize {
        self.checked - self.violations - self.errors
    }

    pub fn line(&self) -> String {
        let d = self.d.map_or(String::new(), |d| format!(" d={d}"));
        format!(
            "{}{d}: checked={} premise={} passed={} violations={} errors={}",
            self.suite,
            self.checked,
            self.premise_held,
            self.passed(),
            self.violations,
            self.errors
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSuiteReport {
    pub seed: u64,
    pub counts: Vec<SuiteCount>,
}

impl LemmaSuiteReport {
    pub fn violations(&self) -> usize {
        self.counts.iter().map(|c| c.violations + c.errors).sum()
    }

    pub fn all_pass(&self) -> bool {
        self.violations() == 0
    }
}

enum Case {
    Pass { premise: bool },
    Violation(String),
    Error(String),
}

fn tally(suite: &str, d: Option<usize>, cases: Vec<Case>) -> SuiteCount {
    let mut c = SuiteCount {
        suite: suite.into(),
        d,
        checked: cases.len(),
        premise_held: 0,
        violations: 0,
        errors: 0,
        examples: Vec::new(),
    };
    for case in cases {
        match case {
            Case::Pass { premise } => c.premise_held += usize::from(premise),
            Case::Violation(m) => {
                c.premise_held += 1;
                c.violations += 1;
                if c.examples.len() < MAX_EXAMPLES {
                    c.examples.push(m);
                }
            }
            Case::Error(m) => {
                c.errors += 1;
                if c.examples.len() < MAX_EXAMPLES {
                    c.examples.push(m);
                }
            }
        }
    }
    c
}

/// Box with rational corners of mixed denominators and aspect ratios up to
/// about 100.
pub fn random_box(rng: &mut ChaCha8Rng, d: usize) -> BoxShape {
    let lo: Vec<Q> = (0..d).map(|_| qr(rng.random_range(-20..20), rng.random_range(1..4))).collect();
    let hi = lo.iter().map(|l| l + qr(rng.random_range(1..30), rng.random_range(1..5))).collect();
    BoxShape::new(lo, hi).expect("positive extents")
}

fn pair_seeds(seed: u64, stage: &str, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| derive_seed(seed, i, stage)).collect()
}

fn describe(b1: &BoxShape, b2: &BoxShape) -> String {
    format!("B1 = {:?}..{:?}, B2 = {:?}..{:?}", b1.lo(), b1.hi(), b2.lo(), b2.hi())
}

fn exact_required(b1: &Shape, b2: &Shape) -> Result<Q> {
    required_s(b1, b2, ProbeBudget::default())?
        .as_exact()
        .cloned()
        .ok_or_else(|| Error::Precondition("box overlap parameter is exact".into()))
}

fn rel1_case(seed: u64, d: usize) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (b1, b2) = (random_box(&mut rng, d), random_box(&mut rng, d));
    let (s1, s2) = (Shape::Box(b1.clone()), Shape::Box(b2.clone()));
    let k = [q(1), qr(3, 2), q(2), q(4), q(8)][rng.random_range(0..5)].clone();
    let s = [q(1), q(2), q(4), q(16), q(64)][rng.random_range(0..5)].clone();
    let premise = le_ks(&s1, &s2, &k, &s)? == TriBool::Holds;
    Ok(if verify_rel1(&s1, &s2, &k, &s)? {
        Case::Pass { premise }
    } else {
        Case::Violation(format!("{} k = {k} s = {s}", describe(&b1, &b2)))
    })
}

fn rel2_case(seed: u64, d: usize) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (b1, b2) = (random_box(&mut rng, d), random_box(&mut rng, d));
    let (s1, s2) = (Shape::Box(b1.clone()), Shape::Box(b2.clone()));
    // Half the cases sit exactly at the threshold.
    let s = exact_required(&s1, &s2)? * [q(1), qr(3, 2), q(2)][rng.random_range(0..3)].clone();
    Ok(if verify_rel2(&s1, &s2, &s)? {
        Case::Pass { premise: true }
    } else {
        Case::Violation(format!("{} s = {s}", describe(&b1, &b2)))
    })
}

fn cmp_case(seed: u64, d: usize) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut b1, mut b2) = (random_box(&mut rng, d), random_box(&mut rng, d));
    if b1.volume() > b2.volume() {
        std::mem::swap(&mut b1, &mut b2);
    }
    let (s1, s2) = (Shape::Box(b1.clone()), Shape::Box(b2.clone()));
    debug_assert!(volume(&s1).compare(&volume(&s2)).is_le());
    let fwd = exact_required(&s1, &s2)?;
    let bwd = exact_required(&s2, &s1)?;
    let s = if fwd < bwd { fwd } else { bwd };
    Ok(if verify_cmp(&s1, &s2, &s)? {
        Case::Pass { premise: true }
    } else {
        Case::Violation(format!("{} s = {s}", describe(&b1, &b2)))
    })
}

fn dichotomy_case(seed: u64) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=200);
    let d = rng.random_range(1..=3);
    let k = rng.random_range(1..=4);
    let span = rng.random_range(5..60);
    let boxes: Vec<BoxShape> = (0..n)
        .map(|_| {
            let lo: Vec<i64> = (0..d).map(|_| rng.random_range(0..span)).collect();
            let hi: Vec<i64> = lo.iter().map(|l| l + rng.random_range(1..12)).collect();
            BoxShape::from_ints(&lo, &hi)
        })
        .collect::<Result<_>>()?;
    let cert = boxes_dichotomy(&boxes, k)?;
    Ok(if verify_dichotomy(&boxes, k, &cert) {
        Case::Pass { premise: true }
    } else {
        Case::Violation(format!("n = {n} d = {d} k = {k}: {cert:?}"))
    })
}

/// Disjoint integer interval families with `|J| <= s' |I|` throughout; `l`
/// is the least reach meeting the premise.
pub fn random_combip_instance(rng: &mut ChaCha8Rng) -> Result<(IntervalFamily, IntervalFamily, u64, u64)> {
    let s_prime: u64 = rng.random_range(1..4);
    let nu = rng.random_range(s_prime as usize + 6..s_prime as usize + 14);
    let nv = rng.random_range(1..40);
    let mut pos: i64 = rng.random_range(-50..50);
    let mut us = Vec::with_capacity(nu);
    let mut min_len = i64::MAX;
    for _ in 0..nu {
        let len = rng.random_range(1..4);
        min_len = min_len.min(len);
        us.push(Interval::from_ends(q(pos), q(pos + len))?);
        pos += len + rng.random_range(1..5);
    }
    let mut vs = Vec::with_capacity(nv);
    let mut pos: i64 = rng.random_range(-200..200);
    for _ in 0..nv {
        let len = rng.random_range(1..=min_len * s_prime as i64);
        vs.push(Interval::from_ends(q(pos), q(pos + len))?);
        pos += len + rng.random_range(1..30);
    }
    let (u, v) = (IntervalFamily::new(us), IntervalFamily::new(vs));
    let l = minimal_reach(&u, &v);
    Ok((u, v, l, s_prime))
}

fn combip_case(seed: u64) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u, v, l, s_prime) = random_combip_instance(&mut rng)?;
    Ok(match combip_check(&u, &v, l, s_prime)? {
        CombipOutcome::Holds => Case::Pass { premise: true },
        CombipOutcome::PremiseUnmet => Case::Pass { premise: false },
        CombipOutcome::Violated => {
            Case::Violation(format!("|U| = {} |V| = {} l = {l} s' = {s_prime}", u.len(), v.len()))
        }
    })
}

fn run<F>(suite: &str, d: Option<usize>, seeds: Vec<u64>, f: F) -> SuiteCount
where
    F: Fn(u64) -> Result<Case> + Sync,
{
    let cases: Vec<Case> = seeds.into_par_iter().map(|s| f(s).unwrap_or_else(|e| Case::Error(e.to_string()))).collect();
    tally(suite, d, cases)
}

/// Runs `rel1`, `rel2` and `cmp` per dimension, then `boxes` and `combip`.
pub fn lemma_suite(cfg: &LemmaSuiteConfig) -> Result<LemmaSuiteReport> {
    cfg.validate()?;
    let mut counts = Vec::new();
    for &d in &cfg.dims {
        let n = cfg.pairs_per_dim;
        counts.push(run("rel1", Some(d), pair_seeds(cfg.seed, &format!("rel1/{d}"), n), |s| rel1_case(s, d)));
        counts.push(run("rel2", Some(d), pair_seeds(cfg.seed, &format!("rel2/{d}"), n), |s| rel2_case(s, d)));
        counts.push(run("cmp", Some(d), pair_seeds(cfg.seed, &format!("cmp/{d}"), n), |s| cmp_case(s, d)));
    }
    counts.push(run("boxes", None, pair_seeds(cfg.seed, "boxes", cfg.dichotomy_families), dichotomy_case));
    counts.push(run("combip", None, pair_seeds(cfg.seed, "combip", cfg.combip_pairs), combip_case));
    Ok(LemmaSuiteReport { seed: cfg.seed, counts })
}
