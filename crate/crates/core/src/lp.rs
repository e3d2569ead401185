//! Self-contained dense two-phase simplex for small linear programs.
//!
//! Variables are free (unbounded sign); the solver splits them internally.
//! Problems carry equality rows `a.x = b`, inequality rows `a.x <= b` and an
//! optional linear objective to minimize. Intended scale is up to roughly a
//! thousand variables and rows, which a dense tableau handles comfortably.

use crate::error::{Error, Result};
use crate::linalg::{check_dim, check_finite, dot};

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    /// Minimize c.x; None solves pure feasibility.
    pub objective: Option<Vec<f64>>,
    pub eq: Vec<(Vec<f64>, f64)>,
    pub ineq: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective: None,
            eq: Vec::new(),
            ineq: Vec::new(),
        }
    }

    pub fn minimize(mut self, c: Vec<f64>) -> Self {
        self.objective = Some(c);
        self
    }

    pub fn add_eq(&mut self, a: Vec<f64>, b: f64) {
        self.eq.push((a, b));
    }

    /// a.x <= b
    pub fn add_leq(&mut self, a: Vec<f64>, b: f64) {
        self.ineq.push((a, b));
    }

    fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::invalid("LP needs at least one variable"));
        }
        if let Some(c) = &self.objective {
            check_dim(c, self.num_vars)?;
            check_finite(c, "objective")?;
        }
        for (a, b) in self.eq.iter().chain(&self.ineq) {
            check_dim(a, self.num_vars)?;
            check_finite(a, "constraint row")?;
            if !b.is_finite() {
                return Err(Error::invalid("constraint rhs is not finite"));
            }
        }
        Ok(())
    }
}

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
const MAX_ITER: usize = 200_000;
const BLAND_AFTER: usize = 20_000;

struct Tableau {
    rows: usize,
    // real columns (split vars + slacks), then artificials, then rhs
    real_cols: usize,
    width: usize,
    t: Vec<Vec<f64>>,
    cost1: Vec<f64>,
    cost2: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.t[r][c];
        let inv = 1.0 / piv;
        for v in self.t[r].iter_mut() {
            *v *= inv;
        }
        // Copy to avoid aliasing while rows update.
        let prow = self.t[r].clone();
        for i in 0..self.rows {
            if i != r {
                let f = self.t[i][c];
                if f != 0.0 {
                    for (v, p) in self.t[i].iter_mut().zip(&prow) {
                        *v -= f * p;
                    }
                }
            }
        }
        for cost in [&mut self.cost1, &mut self.cost2] {
            let f = cost[c];
            if f != 0.0 {
                for (v, p) in cost.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs the simplex on the given cost row until optimal. `allowed` caps
    /// the columns permitted to enter.
    fn run(&mut self, phase1: bool, allowed: usize, iter: &mut usize) -> Result<bool> {
        loop {
            *iter += 1;
            if *iter > MAX_ITER {
                return Err(Error::numerical("simplex iteration limit reached"));
            }
            let bland = *iter > BLAND_AFTER;
            let cost = if phase1 { &self.cost1 } else { &self.cost2 };
            let mut enter = None;
            let mut best = -PIVOT_TOL;
            for j in 0..allowed {
                let cj = cost[j];
                if cj < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = cj;
                }
            }
            let Some(c) = enter else {
                return Ok(true);
            };
            let mut leave = None;
            let mut best_ratio = f64::INFINITY;
            for i in 0..self.rows {
                let a = self.t[i][c];
                if a > PIVOT_TOL {
                    let ratio = self.t[i][self.width - 1] / a;
                    let better = ratio < best_ratio - 1e-12
                        || (ratio < best_ratio + 1e-12
                            && leave.map_or(false, |l: usize| self.basis[i] < self.basis[l]));
                    if better {
                        best_ratio = ratio;
                        leave = Some(i);
                    }
                }
            }
            let Some(r) = leave else {
                return Ok(false); // unbounded in the entering direction
            };
            self.pivot(r, c);
        }
    }
}

/// Solves the LP. Free variables are split into positive parts internally;
/// the returned point is in the original variable space.
pub fn solve_lp(p: &LpProblem) -> Result<LpOutcome> {
    p.validate()?;
    let n = p.num_vars;
    let n_ineq = p.ineq.len();
    let rows = p.eq.len() + n_ineq;
    if rows == 0 {
        // Nothing constrains the variables.
        let x = vec![0.0; n];
        return Ok(match &p.objective {
            Some(c) if c.iter().any(|&v| v != 0.0) => LpOutcome::Unbounded,
            _ => LpOutcome::Optimal {
                x,
                objective: 0.0,
            },
        });
    }
    let real_cols = 2 * n + n_ineq;
    let width = real_cols + rows + 1;

    let mut t = Vec::with_capacity(rows);
    let row_of = |a: &[f64], b: f64, slack: Option<usize>, art: usize| -> Vec<f64> {
        let mut row = vec![0.0; width];
        let flip = if b < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in a.iter().enumerate() {
            row[2 * j] = flip * v;
            row[2 * j + 1] = -flip * v;
        }
        if let Some(s) = slack {
            row[2 * n + s] = flip;
        }
        row[real_cols + art] = 1.0;
        row[width - 1] = flip * b;
        row
    };
    for (i, (a, b)) in p.eq.iter().enumerate() {
        t.push(row_of(a, *b, None, i));
    }
    for (i, (a, b)) in p.ineq.iter().enumerate() {
        t.push(row_of(a, *b, Some(i), p.eq.len() + i));
    }

    // Phase-1 reduced costs: artificials are basic, so subtract every row.
    let mut cost1 = vec![0.0; width];
    for row in &t {
        for (c, v) in cost1.iter_mut().zip(row) {
            *c -= v;
        }
    }
    for j in real_cols..(width - 1) {
        cost1[j] = 0.0;
    }
    let mut cost2 = vec![0.0; width];
    if let Some(c) = &p.objective {
        for (j, &v) in c.iter().enumerate() {
            cost2[2 * j] = v;
            cost2[2 * j + 1] = -v;
        }
    }

    let basis: Vec<usize> = (0..rows).map(|i| real_cols + i).collect();
    let mut tab = Tableau {
        rows,
        real_cols,
        width,
        t,
        cost1,
        cost2,
        basis,
    };

    let mut iter = 0usize;
    let optimal = tab.run(true, tab.real_cols, &mut iter)?;
    debug_assert!(optimal, "phase 1 is bounded below by zero");
    let z1 = -tab.cost1[tab.width - 1];
    if z1 > FEAS_TOL * 10.0 {
        return Ok(LpOutcome::Infeasible);
    }
    // Drive out any artificial still basic at level zero.
    for r in 0..tab.rows {
        if tab.basis[r] >= tab.real_cols {
            let c = (0..tab.real_cols).find(|&j| tab.t[r][j].abs() > PIVOT_TOL);
            if let Some(c) = c {
                tab.pivot(r, c);
            }
            // Otherwise the row is redundant; the artificial stays basic at 0
            // and can never re-enter (entering is capped at real_cols).
        }
    }

    let optimal = tab.run(false, tab.real_cols, &mut iter)?;
    if !optimal {
        return Ok(LpOutcome::Unbounded);
    }

    let mut split = vec![0.0; tab.real_cols];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < tab.real_cols {
            split[b] = tab.t[r][tab.width - 1];
        }
    }
    let x: Vec<f64> = (0..n).map(|j| split[2 * j] - split[2 * j + 1]).collect();
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::numerical("simplex produced a non-finite point"));
    }
    let objective = p.objective.as_ref().map_or(0.0, |c| dot(c, &x));
    Ok(LpOutcome::Optimal { x, objective })
}

impl LpOutcome {
    pub fn optimal(self) -> Result<(Vec<f64>, f64)> {
        match self {
            LpOutcome::Optimal { x, objective } => Ok((x, objective)),
            LpOutcome::Infeasible => Err(Error::numerical("LP infeasible")),
            LpOutcome::Unbounded => Err(Error::numerical("LP unbounded")),
        }
    }
}
