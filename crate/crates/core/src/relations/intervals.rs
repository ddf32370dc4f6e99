use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{q, serde_q, Q};

/// Closed interval `[a - b, a + b]` given by center `a` and half-length `b > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_q")]
    pub center: Q,
    #[serde(with = "serde_q")]
    pub half: Q,
}

impl Interval {
    pub fn new(center: Q, half: Q) -> Result<Self> {
        if !half.is_positive() {
            return Err(Error::Degenerate(format!("interval half-length {half} is not positive")));
        }
        Ok(Interval { center, half })
    }

    /// From endpoints `lo < hi`.
    pub fn from_ends(lo: Q, hi: Q) -> Result<Self> {
        let two = q(2);
        Interval::new((&lo + &hi) / &two, (hi - lo) / two)
    }

    pub fn lo(&self) -> Q {
        &self.center - &self.half
    }

    pub fn hi(&self) -> Q {
        &self.center + &self.half
    }

    pub fn length(&self) -> Q {
        &self.half * q(2)
    }

    /// `k * I = [a - k b, a + k b]`, scaled about the center.
    pub fn scaled(&self, k: &Q) -> Interval {
        Interval { center: self.center.clone(), half: &self.half * k }
    }

    pub fn meets(&self, other: &Interval) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }
}

/// A family of closed intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalFamily {
    pub intervals: Vec<Interval>,
}

impl IntervalFamily {
    pub fn new(intervals: Vec<Interval>) -> Self {
        IntervalFamily { intervals }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// First pair of overlapping members, if any.
    pub fn overlapping_pair(&self) -> Option<(usize, usize)> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| self.intervals[i].lo());
        idx.windows(2)
            .find(|w| self.intervals[w[0]].meets(&self.intervals[w[1]]))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombipOutcome {
    /// `|U| < s' + 6`; the bound is not claimed.
    PremiseUnmet,
    /// `|V| <= 2 s' l^2`.
    Holds,
    Violated,
}

/// Checks that `|V| <= 2 s' l^2` for disjoint families `U`, `V` with
/// `I ∩ (l * J) ≠ ∅` and `|J| <= s' |I|` for all `I ∈ U`, `J ∈ V`, whenever
/// `|U| >= s' + 6`.
pub fn combip_check(u: &IntervalFamily, v: &IntervalFamily, l: u64, s_prime: u64) -> Result<CombipOutcome> {
    if l == 0 || s_prime == 0 {
        return Err(Error::InvalidParameter("l and s' must be positive".into()));
    }
    for (name, fam) in [("U", u), ("V", v)] {
        if let Some((i, j)) = fam.overlapping_pair() {
            return Err(Error::Precondition(format!("{name}[{i}] and {name}[{j}] intersect")));
        }
    }
    let lq = q(l as i64);
    let sq = q(s_prime as i64);
    let mut problems = Vec::new();
    for (a, i) in u.intervals.iter().enumerate() {
        for (b, j) in v.intervals.iter().enumerate() {
            if !i.meets(&j.scaled(&lq)) {
                problems.push(format!("U[{a}] misses l*V[{b}]"));
            }
            if j.length() > &sq * i.length() {
                problems.push(format!("|V[{b}]| > s'|U[{a}]|"));
            }
        }
    }
    if !problems.is_empty() {
        return Err(Error::Precondition(problems.join("; ")));
    }
    if (u.len() as u64) < s_prime + 6 {
        return Ok(CombipOutcome::PremiseUnmet);
    }
    let bound = 2 * s_prime as u128 * (l as u128) * (l as u128);
    Ok(if (v.len() as u128) <= bound { CombipOutcome::Holds } else { CombipOutcome::Violated })
}

/// Smallest integer `l >= 1` with `I ∩ (l * J) ≠ ∅` for all pairs.
pub fn minimal_reach(u: &IntervalFamily, v: &IntervalFamily) -> u64 {
    let mut need = Q::one();
    for i in &u.intervals {
        for j in &v.intervals {
            let gap = (&i.center - &j.center).abs() - &i.half;
            let l = gap / &j.half;
            if l > need {
                need = l;
            }
        }
    }
    crate::num::q_ceil(&need).try_into().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qr;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_at(lo: i64) -> Interval {
        Interval::from_ends(q(lo), q(lo + 1)).unwrap()
    }

    #[test]
    fn far_single_interval_satisfies_bound() {
        let u = IntervalFamily::new((0..10).map(|i| unit_at(2 * i)).collect());
        let v = IntervalFamily::new(vec![unit_at(-100)]);
        let l = minimal_reach(&u, &v);
        assert_eq!(combip_check(&u, &v, l, 4).unwrap(), CombipOutcome::Holds);
        assert!(combip_check(&u, &v, l - 1, 4).is_err());
    }

    #[test]
    fn small_u_skips_the_bound() {
        let sp = 3;
        let u = IntervalFamily::new((0..sp as i64 + 5).map(|i| unit_at(2 * i)).collect());
        let v = IntervalFamily::new(vec![unit_at(-10)]);
        let l = minimal_reach(&u, &v);
        assert_eq!(combip_check(&u, &v, l, sp).unwrap(), CombipOutcome::PremiseUnmet);
    }

    #[test]
    fn overlapping_family_is_rejected() {
        let u = IntervalFamily::new(vec![unit_at(0), Interval::from_ends(qr(1, 2), q(2)).unwrap()]);
        let v = IntervalFamily::new(vec![unit_at(5)]);
        assert!(matches!(combip_check(&u, &v, 100, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn random_premise_satisfying_families_never_violate() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..500 {
            let s_prime: u64 = rng.random_range(1..4);
            let nu = rng.random_range(s_prime as usize + 6..s_prime as usize + 14);
            let nv = rng.random_range(1..40);
            // Disjoint families on integer grids; V lengths at most s' times the
            // shortest U length.
            let mut pos: i64 = rng.random_range(-50..50);
            let mut us = Vec::new();
            let mut min_len = i64::MAX;
            for _ in 0..nu {
                let len = rng.random_range(1..4);
                min_len = min_len.min(len);
                us.push(Interval::from_ends(q(pos), q(pos + len)).unwrap());
                pos += len + rng.random_range(1..5);
            }
            let mut vs = Vec::new();
            let mut pos: i64 = rng.random_range(-200..200);
            for _ in 0..nv {
                let len = rng.random_range(1..=min_len * s_prime as i64);
                vs.push(Interval::from_ends(q(pos), q(pos + len)).unwrap());
                pos += len + rng.random_range(1..30);
            }
            let (u, v) = (IntervalFamily::new(us), IntervalFamily::new(vs));
            let l = minimal_reach(&u, &v);
            assert_ne!(combip_check(&u, &v, l, s_prime).unwrap(), CombipOutcome::Violated);
        }
    }
}
