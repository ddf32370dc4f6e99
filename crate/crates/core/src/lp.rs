//! Small dense linear programs on top of the `clarabel` interior-point solver.
//!
//! Every geometric LP in this crate has at most a handful of variables, so
//! rows are stored densely and converted on solve.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SolverStatus};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct Lp {
    maximize: bool,
    objective: Vec<f64>,
    bounds: Vec<(f64, f64)>,
    rows: Vec<(Vec<f64>, f64)>,
}

#[derive(Clone, Debug)]
pub(crate) enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl Lp {
    pub fn new(nvars: usize, maximize: bool) -> Self {
        Lp {
            maximize,
            objective: vec![0.0; nvars],
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); nvars],
            rows: Vec::new(),
        }
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    /// `row · x <= rhs`
    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.objective.len());
        self.rows.push((row, rhs));
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let n = self.objective.len();
        let sign = if self.maximize { -1.0 } else { 1.0 };
        let mut dense: Vec<Vec<f64>> = Vec::with_capacity(self.rows.len() + 2 * n);
        let mut rhs = Vec::with_capacity(dense.capacity());
        for (row, b) in &self.rows {
            if row.iter().all(|c| *c == 0.0) {
                if *b < -1e-12 {
                    return Ok(LpOutcome::Infeasible);
                }
                continue;
            }
            dense.push(row.clone());
            rhs.push(*b);
        }
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            let mut e = vec![0.0; n];
            if hi.is_finite() {
                e[i] = 1.0;
                dense.push(e.clone());
                rhs.push(hi);
            }
            if lo.is_finite() {
                e[i] = -1.0;
                dense.push(e);
                rhs.push(-lo);
            }
        }
        let m = dense.len();
        let a = if m == 0 { CscMatrix::zeros((0, n)) } else { CscMatrix::from(&dense) };
        let p = CscMatrix::<f64>::zeros((n, n));
        let q: Vec<f64> = self.objective.iter().map(|c| sign * c).collect();
        let cones = [NonnegativeConeT(m)];
        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .tol_gap_abs(1e-10)
            .tol_gap_rel(1e-10)
            .tol_feas(1e-10)
            .build()
            .map_err(|e| Error::Lp(format!("{e:?}")))?;
        let mut solver =
            DefaultSolver::new(&p, &q, &a, &rhs, &cones, settings).map_err(|e| Error::Lp(format!("{e:?}")))?;
        solver.solve();
        let sol = &solver.solution;
        match sol.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => {
                let x = sol.x.clone();
                let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                Ok(LpOutcome::Optimal { value, x })
            }
            SolverStatus::InsufficientProgress | SolverStatus::MaxIterations
                if dense.iter().zip(&rhs).all(|(row, b)| {
                    row.iter().zip(&sol.x).map(|(c, v)| c * v).sum::<f64>() <= b + 1e-7 * (1.0 + b.abs())
                }) =>
            {
                // Stalled close to the optimum; the iterate is still feasible.
                let x = sol.x.clone();
                let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                Ok(LpOutcome::Optimal { value, x })
            }
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => Ok(LpOutcome::Infeasible),
            SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => Ok(LpOutcome::Unbounded),
            other => {
                log::debug!("LP with {m} rows stopped as {other:?} at {:?}", sol.x);
                Err(Error::Lp(format!("solver stopped with status {other:?}")))
            }
        }
    }
}

/// Maximum-margin point of `{x : a_j · x <= b_j}`: maximises `r` subject to
/// `a_j · x + r |a_j| <= b_j`. Returns `(r, x)`; `r < 0` means the system is
/// infeasible by at least `|r|` in the normalised metric.
pub(crate) fn max_margin(dim: usize, rows: &[(Vec<f64>, f64)]) -> Result<(f64, Vec<f64>)> {
    let reach = 1e4 * (1.0 + rows.iter().fold(0.0f64, |m, (a, b)| m.max(b.abs() / norm(a).max(1e-300))));
    max_margin_within(dim, rows, &vec![-reach; dim], &vec![reach; dim])
}

/// [`max_margin`] with `x` confined to the box `[lo, hi]`.
///
/// When the system is feasible inside the box the answer is unchanged;
/// otherwise the margin can only drop, so its sign is still correct. The box
/// also keeps the interior-point path from drifting along an unbounded
/// optimal face.
pub(crate) fn max_margin_within(dim: usize, rows: &[(Vec<f64>, f64)], lo: &[f64], hi: &[f64]) -> Result<(f64, Vec<f64>)> {
    let mut lp = Lp::new(dim + 1, true);
    lp.set_objective(dim, 1.0);
    let diam = lo.iter().zip(hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
    lp.set_bounds(dim, f64::NEG_INFINITY, diam.max(1.0));
    for i in 0..dim {
        lp.set_bounds(i, lo[i], hi[i]);
    }
    let mut normalised = Vec::with_capacity(rows.len());
    for (a, b) in rows {
        let n = norm(a);
        if n < 1e-300 {
            continue;
        }
        let mut row: Vec<f64> = a.iter().map(|v| v / n).collect();
        row.push(1.0);
        normalised.push((row.clone(), b / n));
        lp.add_le(row, b / n);
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, x } => Ok(polish(&normalised, value, x)),
        LpOutcome::Infeasible => Err(Error::Lp("max-margin program reported infeasible".into())),
        LpOutcome::Unbounded => Err(Error::Lp("max-margin program unbounded".into())),
    }
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Interior-point solutions sit slightly inside the optimal face. Re-solving
/// the active constraints as an equation system recovers full precision at
/// a vertex.
fn polish(rows: &[(Vec<f64>, f64)], value: f64, x: Vec<f64>) -> (f64, Vec<f64>) {
    let n = x.len();
    let dim = n - 1;
    let fallback = |mut x: Vec<f64>| {
        x.truncate(dim);
        (value, x)
    };
    let scale = x.iter().chain(rows.iter().map(|(_, b)| b)).fold(1.0f64, |m, v| m.max(v.abs()));
    let active: Vec<&(Vec<f64>, f64)> = rows
        .iter()
        .filter(|(a, b)| (b - a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>()).abs() <= 1e-6 * scale)
        .collect();
    if active.len() < n {
        return fallback(x);
    }
    let m = nalgebra::DMatrix::from_fn(active.len(), n, |r, c| active[r].0[c]);
    let rhs = nalgebra::DVector::from_iterator(active.len(), active.iter().map(|(_, b)| *b));
    let svd = m.svd(true, true);
    if svd.singular_values.iter().any(|&s| s < 1e-9) {
        return fallback(x);
    }
    let Ok(sol) = svd.solve(&rhs, 1e-12) else {
        return fallback(x);
    };
    let y: Vec<f64> = sol.iter().copied().collect();
    let feasible = rows
        .iter()
        .all(|(a, b)| a.iter().zip(&y).map(|(p, q)| p * q).sum::<f64>() <= b + 1e-9 * scale);
    if !feasible || (y[dim] - value).abs() > 1e-5 * scale {
        return fallback(x);
    }
    let r = y[dim];
    let mut y = y;
    y.truncate(dim);
    (r, y)
}
