//! Exact phase-1 simplex over rationals with bounded variables.
//!
//! Decides feasibility of { l <= x <= u, Ax <= / = b } and returns a basic
//! feasible point. Infeasible rows get artificial variables whose total is
//! minimized; Bland's rule keeps the pivot sequence finite and
//! deterministic. No floating point anywhere.

use num::{One, Signed, Zero};

use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpRel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub(crate) struct LpRow {
    /// Dense coefficients over the structural variables.
    pub coeffs: Vec<Rat>,
    pub rel: LpRel,
    pub rhs: Rat,
}

#[derive(Debug, Clone)]
pub(crate) struct LpProblem {
    /// Per-variable bounds; lower bounds must be finite, `None` upper = +inf.
    pub bounds: Vec<(Rat, Option<Rat>)>,
    pub rows: Vec<LpRow>,
}

pub(crate) enum LpOutcome {
    Feasible(Vec<Rat>),
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColState {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    /// T = B^-1 A, maintained by pivoting; cols = structurals, slacks,
    /// artificials.
    t: Vec<Vec<Rat>>,
    /// B^-1 b.
    rhs: Vec<Rat>,
    lower: Vec<Rat>,
    upper: Vec<Option<Rat>>,
    /// Phase-1 cost: 1 on artificials.
    cost: Vec<Rat>,
    state: Vec<ColState>,
    basis: Vec<usize>,
    num_structural: usize,
}

impl Tableau {
    /// Current value of a nonbasic column.
    fn nonbasic_value(&self, j: usize) -> Rat {
        match self.state[j] {
            ColState::AtLower => self.lower[j].clone(),
            ColState::AtUpper => self.upper[j].clone().expect("upper-bounded state"),
            ColState::Basic => unreachable!("basic column has no bound value"),
        }
    }

    /// Values of the basic variables implied by the nonbasic positions.
    fn basic_values(&self) -> Vec<Rat> {
        let mut beta = self.rhs.clone();
        for j in 0..self.lower.len() {
            if self.state[j] == ColState::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            if v.is_zero() {
                continue;
            }
            for (i, row) in self.t.iter().enumerate() {
                if !row[j].is_zero() {
                    beta[i] -= &row[j] * &v;
                }
            }
        }
        beta
    }

    fn reduced_cost(&self, j: usize) -> Rat {
        let mut d = self.cost[j].clone();
        for (i, row) in self.t.iter().enumerate() {
            let cb = &self.cost[self.basis[i]];
            if !cb.is_zero() && !row[j].is_zero() {
                d -= cb * &row[j];
            }
        }
        d
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.t[row][col].clone();
        debug_assert!(!pivot.is_zero());
        for x in self.t[row].iter_mut() {
            *x /= &pivot;
        }
        self.rhs[row] /= &pivot;
        for i in 0..self.t.len() {
            if i == row {
                continue;
            }
            let factor = self.t[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            let pivot_row = self.t[row].clone();
            for (x, pr) in self.t[i].iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *x -= &factor * pr;
                }
            }
            let adj = &factor * &self.rhs[row];
            self.rhs[i] -= adj;
        }
    }
}

/// Finds any feasible point of the problem, or reports infeasibility.
pub(crate) fn feasible_point(problem: &LpProblem) -> LpOutcome {
    let ns = problem.bounds.len();
    let nr = problem.rows.len();

    // Normalize: >= rows negate to <=; every row becomes an equality with a
    // slack in [0, inf) (<=) or no slack (=).
    let mut coeffs: Vec<Vec<Rat>> = Vec::with_capacity(nr);
    let mut rhs: Vec<Rat> = Vec::with_capacity(nr);
    let mut has_slack: Vec<bool> = Vec::with_capacity(nr);
    for row in &problem.rows {
        assert_eq!(row.coeffs.len(), ns);
        let (mut c, mut b) = (row.coeffs.clone(), row.rhs.clone());
        if row.rel == LpRel::Ge {
            for x in c.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        coeffs.push(c);
        rhs.push(b);
        has_slack.push(row.rel != LpRel::Eq);
    }

    // Column layout: structurals | slacks | artificials (added as needed).
    let num_slack = has_slack.iter().filter(|&&s| s).count();
    let mut lower: Vec<Rat> = problem.bounds.iter().map(|(l, _)| l.clone()).collect();
    let mut upper: Vec<Option<Rat>> = problem.bounds.iter().map(|(_, u)| u.clone()).collect();
    for (l, u) in problem.bounds.iter() {
        if let Some(u) = u {
            assert!(l <= u, "empty variable domain reaches the LP");
        }
    }
    lower.extend(std::iter::repeat(Rat::zero()).take(num_slack));
    upper.extend(std::iter::repeat(None).take(num_slack));

    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(nr);
    let mut slack_col_of_row = vec![usize::MAX; nr];
    let mut next_slack = ns;
    for i in 0..nr {
        let mut row = coeffs[i].clone();
        row.extend(std::iter::repeat(Rat::zero()).take(num_slack));
        if has_slack[i] {
            row[next_slack] = Rat::one();
            slack_col_of_row[i] = next_slack;
            next_slack += 1;
        }
        t.push(row);
    }

    // Residuals with every structural at its lower bound.
    let residual: Vec<Rat> = (0..nr)
        .map(|i| {
            let mut r = rhs[i].clone();
            for (j, c) in coeffs[i].iter().enumerate() {
                if !c.is_zero() {
                    r -= c * &lower[j];
                }
            }
            r
        })
        .collect();

    let mut basis = vec![usize::MAX; nr];
    let mut cost = vec![Rat::zero(); ns + num_slack];
    let mut state = vec![ColState::AtLower; ns + num_slack];
    let mut num_cols = ns + num_slack;
    for i in 0..nr {
        if has_slack[i] && !residual[i].is_negative() {
            basis[i] = slack_col_of_row[i];
        } else {
            // Artificial with sign matching the residual, basic at |r|.
            let sigma = if residual[i].is_negative() {
                -Rat::one()
            } else {
                Rat::one()
            };
            for (k, row) in t.iter_mut().enumerate() {
                row.push(if k == i { sigma.clone() } else { Rat::zero() });
            }
            lower.push(Rat::zero());
            upper.push(None);
            cost.push(Rat::one());
            state.push(ColState::AtLower);
            basis[i] = num_cols;
            num_cols += 1;
        }
        state[basis[i]] = ColState::Basic;
    }

    // Scale rows so T[i][basis[i]] = 1 (artificial columns may carry -1).
    let mut tab = Tableau {
        t,
        rhs,
        lower,
        upper,
        cost,
        state,
        basis,
        num_structural: ns,
    };
    for i in 0..nr {
        if tab.t[i][tab.basis[i]] < Rat::zero() {
            for x in tab.t[i].iter_mut() {
                *x = -x.clone();
            }
            tab.rhs[i] = -tab.rhs[i].clone();
        }
    }

    // Phase-1 reduced costs, maintained across pivots.
    let mut reduced: Vec<Rat> = (0..num_cols).map(|j| tab.reduced_cost(j)).collect();

    let mut iterations = 0usize;
    loop {
        iterations += 1;
        assert!(iterations < 200_000, "simplex failed to terminate");

        // Bland: the lowest-index nonbasic column that improves phase 1.
        let mut entering = None;
        for j in 0..num_cols {
            let improves = match tab.state[j] {
                ColState::AtLower => reduced[j].is_negative(),
                ColState::AtUpper => reduced[j].is_positive(),
                ColState::Basic => false,
            };
            if improves {
                entering = Some(j);
                break;
            }
        }
        let entering = match entering {
            Some(j) => j,
            None => break,
        };
        let increasing = tab.state[entering] == ColState::AtLower;
        let beta = tab.basic_values();

        // Ratio test: how far can the entering variable move before itself
        // or some basic variable hits a bound.
        let own_range = tab.upper[entering]
            .as_ref()
            .map(|u| u - &tab.lower[entering]);
        let mut best: Option<(Rat, usize)> = own_range.map(|r| (r, entering));
        for i in 0..tab.t.len() {
            let coef = &tab.t[i][entering];
            if coef.is_zero() {
                continue;
            }
            // d(beta_i)/dt for the entering step t >= 0.
            let rate = if increasing {
                -coef.clone()
            } else {
                coef.clone()
            };
            let b = tab.basis[i];
            let ratio = if rate.is_positive() {
                match &tab.upper[b] {
                    Some(u) => Some((u - &beta[i]) / &rate),
                    None => None,
                }
            } else {
                Some((&beta[i] - &tab.lower[b]) / -&rate)
            };
            if let Some(r) = ratio {
                debug_assert!(!r.is_negative(), "basic value escaped its bounds");
                match &best {
                    None => best = Some((r, b)),
                    Some((br, bv)) => {
                        if r < *br || (r == *br && b < *bv) {
                            best = Some((r, b));
                        }
                    }
                }
            }
        }
        let (_, blocker) = best.expect("phase-1 objective is bounded; some bound must block");

        if blocker == entering {
            // Bound flip: the entering variable crosses its whole range.
            tab.state[entering] = if increasing {
                ColState::AtUpper
            } else {
                ColState::AtLower
            };
            continue;
        }
        let leave_row = (0..tab.t.len()).find(|&i| tab.basis[i] == blocker).unwrap();
        let rate_positive = {
            let coef = &tab.t[leave_row][entering];
            if increasing {
                coef.is_negative()
            } else {
                coef.is_positive()
            }
        };
        tab.state[blocker] = if rate_positive {
            ColState::AtUpper
        } else {
            ColState::AtLower
        };
        tab.state[entering] = ColState::Basic;
        tab.basis[leave_row] = entering;
        tab.pivot(leave_row, entering);
        let factor = reduced[entering].clone();
        if !factor.is_zero() {
            for (d, t) in reduced.iter_mut().zip(&tab.t[leave_row]) {
                if !t.is_zero() {
                    *d -= &factor * t;
                }
            }
        }
    }

    // Optimal: feasible iff every artificial sits at zero.
    let beta = tab.basic_values();
    let mut artificial_total = Rat::zero();
    for j in 0..num_cols {
        if !tab.cost[j].is_zero() {
            let v = match tab.state[j] {
                ColState::Basic => {
                    let row = (0..tab.t.len()).find(|&i| tab.basis[i] == j).unwrap();
                    beta[row].clone()
                }
                _ => tab.nonbasic_value(j),
            };
            artificial_total += v;
        }
    }
    if !artificial_total.is_zero() {
        return LpOutcome::Infeasible;
    }
    let mut x = Vec::with_capacity(ns);
    for j in 0..tab.num_structural {
        let v = match tab.state[j] {
            ColState::Basic => {
                let row = (0..tab.t.len()).find(|&i| tab.basis[i] == j).unwrap();
                beta[row].clone()
            }
            _ => tab.nonbasic_value(j),
        };
        x.push(v);
    }
    LpOutcome::Feasible(x)
}
