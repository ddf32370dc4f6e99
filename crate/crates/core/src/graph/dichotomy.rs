use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BoxShape;
use crate::num::{serde_q, Q};

/// Outcome of the box-projection dichotomy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Dichotomy {
    /// `k` boxes whose projections on `axis` are pairwise disjoint.
    Disjoint { axis: usize, members: Vec<usize> },
    /// At least `n / k^d` boxes all containing `point`.
    Common {
        members: Vec<usize>,
        #[serde(with = "serde_q::vec")]
        point: Vec<Q>,
    },
}

/// Greedy maximum set of pairwise disjoint closed intervals, by right end.
fn greedy_disjoint(boxes: &[BoxShape], ids: &[usize], axis: usize) -> Vec<usize> {
    let mut order = ids.to_vec();
    order.sort_by(|&a, &b| boxes[a].hi()[axis].cmp(&boxes[b].hi()[axis]).then(a.cmp(&b)));
    let mut out: Vec<usize> = Vec::new();
    for i in order {
        if out.last().is_none_or(|&j| boxes[i].lo()[axis] > boxes[j].hi()[axis]) {
            out.push(i);
        }
    }
    out
}

/// Point on `axis` covered by the most intervals; always a right end.
fn deepest_point(boxes: &[BoxShape], ids: &[usize], axis: usize) -> Q {
    let mut los: Vec<&Q> = ids.iter().map(|&i| &boxes[i].lo()[axis]).collect();
    let mut his: Vec<&Q> = ids.iter().map(|&i| &boxes[i].hi()[axis]).collect();
    los.sort();
    his.sort();
    let mut best: Option<(usize, &Q)> = None;
    for &x in &his {
        let depth = los.partition_point(|l| *l <= x) - his.partition_point(|h| *h < x);
        if best.is_none_or(|(b, _)| depth > b) {
            best = Some((depth, x));
        }
    }
    best.expect("nonempty family").1.clone()
}

/// Either `k` boxes with disjoint projections on one axis, or a large
/// subfamily with a common point.
///
/// Axes are scanned in order on the whole family and the first with `k`
/// disjoint projections wins. Otherwise each axis keeps the intervals through
/// its deepest point; since the interval graph on that axis has no `k`
/// independent members, that keeps at least a `1/k` share.
pub fn boxes_dichotomy(boxes: &[BoxShape], k: usize) -> Result<Dichotomy> {
    if boxes.is_empty() {
        return Err(Error::InvalidParameter("empty box family".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let d = boxes[0].dim();
    if let Some(b) = boxes.iter().find(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: b.dim() });
    }
    let all: Vec<usize> = (0..boxes.len()).collect();
    for axis in 0..d {
        let sel = greedy_disjoint(boxes, &all, axis);
        if sel.len() >= k {
            let mut members = sel[..k].to_vec();
            members.sort_unstable();
            return Ok(Dichotomy::Disjoint { axis, members });
        }
    }
    let mut members = all;
    let mut point = Vec::with_capacity(d);
    for axis in 0..d {
        let x = deepest_point(boxes, &members, axis);
        members.retain(|&i| boxes[i].lo()[axis] <= x && x <= boxes[i].hi()[axis]);
        point.push(x);
    }
    Ok(Dichotomy::Common { members, point })
}

/// Checks a dichotomy certificate exactly.
pub fn verify_dichotomy(boxes: &[BoxShape], k: usize, cert: &Dichotomy) -> bool {
    let n = boxes.len();
    let distinct = |m: &[usize]| {
        let mut v = m.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len() == m.len() && v.iter().all(|&i| i < n)
    };
    match cert {
        Dichotomy::Disjoint { axis, members } => {
            distinct(members)
                && members.len() == k
                && boxes.first().is_some_and(|b| *axis < b.dim())
                && members.iter().enumerate().all(|(a, &i)| {
                    members[a + 1..].iter().all(|&j| {
                        boxes[i].hi()[*axis] < boxes[j].lo()[*axis] || boxes[j].hi()[*axis] < boxes[i].lo()[*axis]
                    })
                })
        }
        Dichotomy::Common { members, point } => {
            let d = boxes.first().map_or(0, BoxShape::dim) as u32;
            distinct(members)
                && members.iter().all(|&i| boxes[i].contains(point))
                && (members.len() as u128) * (k as u128).pow(d) >= n as u128
        }
    }
}
