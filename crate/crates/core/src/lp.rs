//! A small dense simplex solver over [`Scalar`].
//!
//! Exact mode gives exact optima and exact feasibility decisions, which is
//! what the geometric predicates in this crate are built on. Two-phase with
//! artificial variables for `=`/`>=` rows, free variables split into
//! differences of nonnegatives, and Bland's pivoting rule always on: the
//! geometry this solver serves is deliberately degenerate, so cycling is a
//! live risk and speed is not a concern at these sizes.

use thiserror::Error;

use crate::num::{Scalar, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// Per-variable lower bound: `x >= 0` or unrestricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Debug, Clone)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

impl<S> Constraint<S> {
    pub fn new(coeffs: Vec<S>, relation: Relation, rhs: S) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// Maximize `objective · x` subject to the constraints and variable bounds.
#[derive(Debug, Clone)]
pub struct LinearProgram<S> {
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
    pub bounds: Vec<VarBound>,
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(objective: Vec<S>, constraints: Vec<Constraint<S>>, bounds: Vec<VarBound>) -> Self {
        LinearProgram {
            objective,
            constraints,
            bounds,
        }
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(LpError::Malformed(
                "bounds length differs from variable count".into(),
            ));
        }
        if self.constraints.iter().any(|c| c.coeffs.len() != n) {
            return Err(LpError::Malformed(
                "constraint row length differs from variable count".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { point: Vec<S>, objective_value: S },
    Infeasible,
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn optimal(&self) -> Option<(&[S], &S)> {
        match self {
            LpOutcome::Optimal {
                point,
                objective_value,
            } => Some((point, objective_value)),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
}

/// Dense two-phase simplex tableau. Column layout: structural columns for
/// the (split) original variables, then slack/surplus columns, then
/// artificial columns.
struct Tableau<S> {
    rows: Vec<Vec<S>>,
    basis: Vec<usize>,
    n_cols: usize,
    first_artificial: usize,
    threshold: f64,
}

impl<S: Scalar> Tableau<S> {
    fn is_zero(&self, x: &S) -> bool {
        if S::EXACT {
            x.is_zero()
        } else {
            x.to_f64().abs() <= self.threshold
        }
    }

    fn is_positive(&self, x: &S) -> bool {
        !self.is_zero(x) && x.is_positive()
    }

    fn rhs(&self, i: usize) -> &S {
        &self.rows[i][self.n_cols]
    }

    /// Normalizes the pivot row and eliminates the pivot column from every
    /// other row and from `cost_row`.
    fn pivot(&mut self, cost_row: &mut [S], p: usize, q: usize) {
        let pivot_val = self.rows[p][q].clone();
        for v in self.rows[p].iter_mut() {
            *v = v.clone() / pivot_val.clone();
        }
        let pivot_row = self.rows[p].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == p {
                continue;
            }
            let factor = row[q].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
            row[q] = S::zero();
        }
        let factor = cost_row[q].clone();
        if !factor.is_zero() {
            for (v, pv) in cost_row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
            cost_row[q] = S::zero();
        }
        self.basis[p] = q;
    }

    /// Reduced costs for `costs` priced out against the current basis; the
    /// last slot carries the negated objective value.
    fn priced_cost_row(&self, costs: &[S]) -> Vec<S> {
        let mut row: Vec<S> = costs.to_vec();
        row.push(S::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let factor = row[b].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, tv) in row.iter_mut().zip(&self.rows[i]) {
                *v = v.clone() - factor.clone() * tv.clone();
            }
            row[b] = S::zero();
        }
        row
    }

    /// Runs simplex iterations until optimality or unboundedness. Columns at
    /// or beyond `enter_limit` never enter the basis.
    fn optimize(&mut self, cost_row: &mut [S], enter_limit: usize) -> bool {
        let mut iterations = 0usize;
        loop {
            iterations += 1;
            assert!(
                iterations < 200_000,
                "simplex failed to terminate (float-mode tolerance issue?)"
            );
            // Bland: entering column is the lowest-index improving one.
            let entering = (0..enter_limit).find(|&j| self.is_positive(&cost_row[j]));
            let Some(q) = entering else { return true };
            // Ratio test; ties broken by the smallest basic variable index.
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                if !self.is_positive(&self.rows[i][q]) {
                    continue;
                }
                let ratio = self.rhs(i).clone() / self.rows[i][q].clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => match ratio.total_cmp(&br) {
                        std::cmp::Ordering::Less => Some((i, ratio)),
                        std::cmp::Ordering::Equal if self.basis[i] < self.basis[bi] => {
                            Some((i, ratio))
                        }
                        _ => Some((bi, br)),
                    },
                };
            }
            let Some((p, _)) = best else { return false };
            self.pivot(cost_row, p, q);
        }
    }
}

/// Solves the program exactly (exact mode) or with default tolerances
/// (float mode; not contract-bearing). Deterministic given input ordering.
pub fn solve_lp<S: Scalar>(lp: &LinearProgram<S>) -> Result<LpOutcome<S>, LpError> {
    lp.validate()?;
    let n_orig = lp.objective.len();
    let m = lp.constraints.len();

    // Column map: free variables become x+ - x-.
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n_orig);
    let mut n_struct = 0usize;
    for bound in &lp.bounds {
        match bound {
            VarBound::NonNegative => {
                col_of.push((n_struct, None));
                n_struct += 1;
            }
            VarBound::Free => {
                col_of.push((n_struct, Some(n_struct + 1)));
                n_struct += 2;
            }
        }
    }

    let n_slack = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let first_slack = n_struct;
    let first_artificial = n_struct + n_slack;
    // One artificial per row keeps the initial basis trivial.
    let n_cols = first_artificial + m;

    let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut slack_idx = 0usize;
    for (i, con) in lp.constraints.iter().enumerate() {
        let mut row = vec![S::zero(); n_cols + 1];
        let flip = con.rhs.is_negative();
        let sgn = |v: S| if flip { -v } else { v };
        for (j, coef) in con.coeffs.iter().enumerate() {
            let (pos, neg) = col_of[j];
            let value = sgn(coef.clone());
            row[pos] = value.clone();
            if let Some(neg) = neg {
                row[neg] = -value;
            }
        }
        row[n_cols] = sgn(con.rhs.clone());
        let relation = if flip {
            match con.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            }
        } else {
            con.relation
        };
        match relation {
            Relation::Le => {
                row[first_slack + slack_idx] = S::one();
                slack_idx += 1;
            }
            Relation::Ge => {
                row[first_slack + slack_idx] = -S::one();
                slack_idx += 1;
            }
            Relation::Eq => {}
        }
        row[first_artificial + i] = S::one();
        basis.push(first_artificial + i);
        rows.push(row);
    }

    let tol = Tolerance::default();
    let scale = rows
        .iter()
        .flatten()
        .map(|x| x.to_f64().abs())
        .fold(1.0f64, f64::max);
    let threshold = if S::EXACT {
        0.0
    } else {
        tol.abs.max(tol.rel * scale)
    };

    let mut tab = Tableau {
        rows,
        basis,
        n_cols,
        first_artificial,
        threshold,
    };

    // Phase 1: maximize -(sum of artificials); feasible iff the optimum is 0.
    let mut phase1_costs = vec![S::zero(); n_cols];
    for cost in phase1_costs[first_artificial..].iter_mut() {
        *cost = -S::one();
    }
    let mut cost_row = tab.priced_cost_row(&phase1_costs);
    let bounded = tab.optimize(&mut cost_row, n_cols);
    assert!(bounded, "phase-1 objective is bounded by construction");
    let infeasibility = -cost_row[n_cols].clone();
    if !tab.is_zero(&infeasibility) {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive leftover artificials out of the basis; fully dependent rows are
    // redundant and can be dropped.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= tab.first_artificial {
            let pivot_col = (0..tab.first_artificial).find(|&j| !tab.is_zero(&tab.rows[i][j]));
            match pivot_col {
                Some(q) => tab.pivot(&mut cost_row, i, q),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2 over the structural and slack columns only.
    let mut phase2_costs = vec![S::zero(); n_cols];
    for (j, coef) in lp.objective.iter().enumerate() {
        let (pos, neg) = col_of[j];
        phase2_costs[pos] = coef.clone();
        if let Some(neg) = neg {
            phase2_costs[neg] = -coef.clone();
        }
    }
    let mut cost_row = tab.priced_cost_row(&phase2_costs);
    let enter_limit = tab.first_artificial;
    if !tab.optimize(&mut cost_row, enter_limit) {
        return Ok(LpOutcome::Unbounded);
    }

    // Read the primal point back out of the basis.
    let mut col_values = vec![S::zero(); n_cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        col_values[b] = tab.rhs(i).clone();
    }
    let point: Vec<S> = col_of
        .iter()
        .map(|&(pos, neg)| match neg {
            None => col_values[pos].clone(),
            Some(neg) => col_values[pos].clone() - col_values[neg].clone(),
        })
        .collect();
    let objective_value = lp
        .objective
        .iter()
        .zip(&point)
        .fold(S::zero(), |acc, (c, x)| acc + c.clone() * x.clone());
    Ok(LpOutcome::Optimal {
        point,
        objective_value,
    })
}
