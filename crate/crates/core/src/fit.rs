//! Capacity identification from preferences with fixed value functions, and
//! checking a capacity against stated preferences.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::capacity::{Capacity, MobiusRep};
use crate::error::{Error, Result};
use crate::integral::{choquet_mobius, sorted_permutation};
use crate::lp::{Constraint, LinearProgram, LpOutcome, Sense, SolverOptions, solve};
use crate::prefs::{PairStatement, PreferenceData, PreferenceStructure};
use crate::product::{Alternative, ProductModel};
use crate::subset::Subset;

/// Largest number of criteria accepted by [`fit_capacity`].
pub const MAX_FIT_CRITERIA: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct FitProblem {
    pub prefs: PreferenceStructure,
    /// Margin required of every strict preference.
    pub epsilon: f64,
    pub options: SolverOptions,
}

impl FitProblem {
    pub fn new(prefs: PreferenceStructure, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::NonPositiveEpsilon(epsilon));
        }
        if let Some(i) = prefs.model().scales().iter().position(|s| s.values.is_none()) {
            return Err(Error::MissingValues(i));
        }
        if prefs.model().n() > MAX_FIT_CRITERIA {
            return Err(Error::FitTooLarge(prefs.model().n()));
        }
        Ok(FitProblem { prefs, epsilon, options: SolverOptions::default() })
    }

    /// Uses [`default_epsilon`] for the margin.
    pub fn with_default_epsilon(prefs: PreferenceStructure) -> Result<Self> {
        let eps = default_epsilon(prefs.model());
        FitProblem::new(prefs, eps)
    }
}

/// `1e-3` times the spread of all scale values (or `1e-3` when flat).
pub fn default_epsilon(model: &ProductModel) -> f64 {
    let all = model.scales().iter().filter_map(|s| s.values.as_ref()).flatten().copied();
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    if range.is_finite() && range > 0.0 { 1e-3 * range } else { 1e-3 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub status: FitStatus,
    pub mobius: Option<MobiusRep>,
    /// Largest shortfall against the stated preferences at the LP optimum:
    /// `ε − (C(x) − C(y))` for strict, `|C(x) − C(y)|` for indifference.
    pub max_violation: f64,
    /// Rows of the LP holding with equality at the optimum.
    pub active_constraints: usize,
    /// Optimal common slack above `ε`.
    pub min_slack: f64,
}

/// Coefficients of the integral as a linear form in `ν(A)`, indexed by `A - 1`.
fn integral_row(n: usize, f: &[f64]) -> Vec<(usize, f64)> {
    let mut upper = Subset::full(n);
    let mut prev = 0.0;
    let mut row = Vec::with_capacity(n);
    for i in sorted_permutation(f) {
        if f[i] != prev {
            row.push((upper.bits() - 1, f[i] - prev));
        }
        prev = f[i];
        upper = upper.remove(i);
    }
    row
}

fn difference(a: &[(usize, f64)], b: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for &(v, c) in a {
        *acc.entry(v).or_default() += c;
    }
    for &(v, c) in b {
        *acc.entry(v).or_default() -= c;
    }
    acc.into_iter().filter(|(_, c)| *c != 0.0).collect()
}

/// The preference statements the LP has to honor. Ranked data are reduced to
/// indifference chains within classes and one strict link between
/// consecutive classes.
fn statements(prefs: &PreferenceStructure) -> Vec<PairStatement> {
    match prefs.data() {
        PreferenceData::Pairs(p) => p.clone(),
        PreferenceData::Ranked(ranks) => {
            let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
            for (k, &r) in ranks.iter().enumerate() {
                classes.entry(r).or_default().push(k);
            }
            let mut out = Vec::new();
            let mut below: Option<usize> = None;
            for members in classes.values() {
                for w in members.windows(2) {
                    out.push(PairStatement { better: w[1], worse: w[0], strict: false });
                }
                if let Some(b) = below {
                    out.push(PairStatement { better: members[0], worse: b, strict: true });
                }
                below = Some(members[0]);
            }
            out
        }
    }
}

pub fn fit_capacity(problem: &FitProblem) -> Result<FitResult> {
    let prefs = &problem.prefs;
    let model = prefs.model();
    let n = model.n();
    if n > MAX_FIT_CRITERIA {
        return Err(Error::FitTooLarge(n));
    }
    let rows: Vec<Vec<(usize, f64)>> = prefs
        .alternatives()
        .iter()
        .map(|x| Ok(integral_row(n, &model.scores(x)?)))
        .collect::<Result<_>>()?;
    let nu = (1usize << n) - 1;
    let (t_plus, t_minus) = (nu, nu + 1);
    let mut constraints = vec![Constraint { terms: vec![(nu - 1, 1.0)], sense: Sense::Eq, rhs: 1.0 }];
    for a in 1..=nu {
        let set = Subset(a as u32);
        for i in set.members() {
            let rest = set.remove(i);
            if !rest.is_empty() {
                constraints.push(Constraint {
                    terms: vec![(a - 1, 1.0), (rest.bits() - 1, -1.0)],
                    sense: Sense::Ge,
                    rhs: 0.0,
                });
            }
        }
    }
    let stated = statements(prefs);
    let first_statement = constraints.len();
    for s in &stated {
        let mut terms = difference(&rows[s.better], &rows[s.worse]);
        if s.strict {
            terms.push((t_plus, -1.0));
            terms.push((t_minus, 1.0));
            constraints.push(Constraint { terms, sense: Sense::Ge, rhs: problem.epsilon });
        } else {
            constraints.push(Constraint { terms, sense: Sense::Eq, rhs: 0.0 });
        }
    }
    // the slack never needs to exceed the value spread; the cap keeps the LP bounded
    let cap = (default_epsilon(model) * 1e3).max(1.0);
    constraints.push(Constraint { terms: vec![(t_plus, 1.0)], sense: Sense::Le, rhs: cap });
    let mut objective = vec![0.0; nu + 2];
    objective[t_plus] = 1.0;
    objective[t_minus] = -1.0;
    let lp = LinearProgram { vars: nu + 2, objective, constraints };

    match solve(&lp, &problem.options)? {
        LpOutcome::Unbounded => Err(Error::Solver("slack objective unbounded despite its cap".into())),
        LpOutcome::Infeasible { residual } => Ok(FitResult {
            status: FitStatus::Infeasible,
            mobius: None,
            max_violation: residual,
            active_constraints: 0,
            min_slack: f64::NEG_INFINITY,
        }),
        LpOutcome::Optimal { x, value } => {
            let tol = problem.options.tolerance;
            let active = lp
                .constraints
                .iter()
                .filter(|c| {
                    let lhs: f64 = c.terms.iter().map(|&(v, k)| k * x[v]).sum();
                    (lhs - c.rhs).abs() <= tol * (1.0 + c.rhs.abs())
                })
                .count();
            let mut values = vec![0.0; nu + 1];
            values[1..].copy_from_slice(&x[..nu]);
            let capacity = Capacity::new(n, values)?;
            let mobius = capacity.to_mobius();
            let shortfall = stated
                .iter()
                .zip(&lp.constraints[first_statement..])
                .map(|(s, c)| {
                    let d: f64 = c.terms.iter().filter(|(v, _)| *v < nu).map(|&(v, k)| k * x[v]).sum();
                    if s.strict { problem.epsilon - d } else { d.abs() }
                })
                .fold(0.0, f64::max);
            let feasible = value >= -tol;
            Ok(FitResult {
                status: if feasible { FitStatus::Feasible } else { FitStatus::Infeasible },
                mobius: feasible.then_some(mobius),
                max_violation: shortfall.max(0.0),
                active_constraints: active,
                min_slack: value,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub better: Alternative,
    pub worse: Alternative,
    pub strict: bool,
    /// `C(better) − C(worse)`.
    pub difference: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl RepresentationReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Every stated comparison (every pair, for ranked data) against the sign
/// of the integral difference; differences within `tol` count as ties.
pub fn verify_representation(m: &MobiusRep, prefs: &PreferenceStructure, tol: f64) -> Result<RepresentationReport> {
    let model = prefs.model();
    if m.n() != model.n() {
        return Err(Error::LengthMismatch { expected: model.n(), found: m.n() });
    }
    let alts = prefs.alternatives();
    let values: Vec<f64> = alts.iter().map(|x| choquet_mobius(m, &model.scores(x)?)).collect::<Result<_>>()?;
    let mut report = RepresentationReport { checked: 0, mismatches: Vec::new() };
    let mut audit = |s: PairStatement| {
        report.checked += 1;
        let d = values[s.better] - values[s.worse];
        let ok = if s.strict { d > tol } else { d.abs() <= tol };
        if !ok {
            report.mismatches.push(Mismatch {
                better: alts[s.better].clone(),
                worse: alts[s.worse].clone(),
                strict: s.strict,
                difference: d,
            });
        }
    };
    match prefs.data() {
        PreferenceData::Pairs(p) => p.iter().for_each(|&s| audit(s)),
        PreferenceData::Ranked(ranks) => {
            for a in 0..alts.len() {
                for b in a + 1..alts.len() {
                    let (better, worse) = if ranks[a] >= ranks[b] { (a, b) } else { (b, a) };
                    audit(PairStatement { better, worse, strict: ranks[a] != ranks[b] });
                }
            }
        }
    }
    Ok(report)
}
