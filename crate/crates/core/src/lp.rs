//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Problems are `maximize c·x` subject to linear rows and `x ≥ 0`. Sizes
//! here stay in the low thousands of columns, so a dense tableau is fine.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    /// Sparse `(variable, coefficient)` terms.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tolerance: 1e-9, max_iterations: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    /// Phase one ended with this total artificial mass.
    Infeasible { residual: f64 },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            let f = row[c];
            if k != r && f != 0.0 {
                row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            self.cost.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
        }
        self.basis[r] = c;
    }

    /// Loads `maximize obj·x` as reduced costs relative to the current basis.
    fn set_objective(&mut self, obj: &[f64]) {
        self.cost = vec![0.0; self.width + 1];
        for (c, &v) in obj.iter().enumerate() {
            self.cost[c] = -v;
        }
        for r in 0..self.rows.len() {
            let f = self.cost[self.basis[r]];
            if f != 0.0 {
                let row = self.rows[r].clone();
                self.cost.iter_mut().zip(&row).for_each(|(v, p)| *v -= f * p);
            }
        }
    }

    /// Runs to optimality over the columns allowed by `usable`. Returns
    /// `false` when unbounded.
    fn optimize(&mut self, usable: &[bool], opts: &SolverOptions, iterations: &mut usize) -> Result<bool> {
        loop {
            let Some(enter) = (0..self.width).find(|&c| usable[c] && self.cost[c] < -opts.tolerance) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][enter];
                if a > opts.tolerance {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((best, q)) => {
                            if ratio < q - opts.tolerance || (ratio <= q + opts.tolerance && self.basis[r] < self.basis[best]) {
                                Some((r, ratio))
                            } else {
                                Some((best, q))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else { return Ok(false) };
            self.pivot(r, enter);
            *iterations += 1;
            if *iterations > opts.max_iterations {
                return Err(Error::Solver(format!("iteration limit {} reached", opts.max_iterations)));
            }
        }
    }
}

pub fn solve(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpOutcome> {
    if lp.objective.len() != lp.vars {
        return Err(Error::LengthMismatch { expected: lp.vars, found: lp.objective.len() });
    }
    let m = lp.constraints.len();
    // rows with a negative right-hand side are negated, which flips Le and Ge
    let senses: Vec<Sense> = lp
        .constraints
        .iter()
        .map(|c| match (c.sense, c.rhs < 0.0) {
            (Sense::Le, true) => Sense::Ge,
            (Sense::Ge, true) => Sense::Le,
            (sense, _) => sense,
        })
        .collect();
    let slacks = senses.iter().filter(|&&s| s != Sense::Eq).count();
    let artificials = senses.iter().filter(|&&s| s != Sense::Le).count();
    let width = lp.vars + slacks + artificials;
    let first_art = lp.vars + slacks;
    let mut t = Tableau { rows: Vec::with_capacity(m), cost: Vec::new(), basis: Vec::with_capacity(m), width };
    let (mut s, mut a) = (lp.vars, first_art);
    for (con, &sense) in lp.constraints.iter().zip(&senses) {
        let mut row = vec![0.0; width + 1];
        for &(v, coef) in &con.terms {
            if v >= lp.vars || !coef.is_finite() {
                return Err(Error::Solver(format!("bad term ({v}, {coef})")));
            }
            row[v] += coef;
        }
        row[width] = con.rhs;
        if con.rhs < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
        }
        match sense {
            Sense::Le => {
                row[s] = 1.0;
                t.basis.push(s);
                s += 1;
            }
            Sense::Ge => {
                row[s] = -1.0;
                row[a] = 1.0;
                t.basis.push(a);
                s += 1;
                a += 1;
            }
            Sense::Eq => {
                row[a] = 1.0;
                t.basis.push(a);
                a += 1;
            }
        }
        t.rows.push(row);
    }

    let mut iterations = 0;
    let all = vec![true; width];
    let phase1: Vec<f64> = (0..width).map(|c| if c >= first_art { -1.0 } else { 0.0 }).collect();
    t.set_objective(&phase1);
    t.optimize(&all, opts, &mut iterations)?;
    let residual: f64 = (0..m).filter(|&r| t.basis[r] >= first_art).map(|r| t.rhs(r)).sum();
    let scale = 1.0 + lp.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
    if residual > opts.tolerance * scale {
        return Ok(LpOutcome::Infeasible { residual });
    }
    // drive zero-level artificials out of the basis; rows with no other
    // support are redundant and dropped
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= first_art {
            match (0..first_art).find(|&c| t.rows[r][c].abs() > opts.tolerance) {
                Some(c) => t.pivot(r, c),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let usable: Vec<bool> = (0..width).map(|c| c < first_art).collect();
    let mut obj = lp.objective.clone();
    obj.resize(width, 0.0);
    t.set_objective(&obj);
    if !t.optimize(&usable, opts, &mut iterations)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; lp.vars];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < lp.vars {
            x[b] = t.rhs(r);
        }
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { x, value })
}
