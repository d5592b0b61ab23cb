//! End-to-end check of one model: induced order, axioms, refit, and
//! invariance under clique transforms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::axioms::{AxiomId, AxiomReport, CheckOptions, NECESSARY, Status, run_checks};
use crate::capacity::{DEFAULT_TOLERANCE, MobiusRep};
use crate::fit::{FitProblem, FitStatus, fit_capacity, verify_representation};
use crate::generate::rng;
use crate::integral::{SpecialCase, classify_special, cliques_from_mobius};
use crate::prefs::induced_order;
use crate::product::{ProductModel, enumerate_grid};
use crate::uniqueness::{CliqueTransform, apply_uniqueness_transform};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Validate,
    Induce,
    Axioms,
    Fit,
    Verify,
    Transform,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Validate => "validate",
            Stage::Induce => "induce",
            Stage::Axioms => "axioms",
            Stage::Fit => "fit",
            Stage::Verify => "verify",
            Stage::Transform => "transform",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageOutcome {
    pub stage: Stage,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct RoundtripOptions {
    pub seed: u64,
    pub check: CheckOptions,
    /// Fit margin; `None` uses the default for the model.
    pub epsilon: Option<f64>,
    pub tolerance: f64,
    /// Random clique transforms tried in the last stage.
    pub transforms: usize,
}

impl Default for RoundtripOptions {
    fn default() -> Self {
        RoundtripOptions { seed: 0, check: CheckOptions::default(), epsilon: None, tolerance: DEFAULT_TOLERANCE, transforms: 10 }
    }
}

#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub seed: u64,
    pub stages: Vec<StageOutcome>,
    pub axioms: Vec<AxiomReport>,
    pub fitted: Option<MobiusRep>,
    pub fitted_kind: Option<SpecialCase>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&StageOutcome> {
        self.stages.iter().find(|s| !s.passed)
    }
}

/// Runs the stages in order and stops at the first one that cannot feed the
/// next. The axiom stage fails on any `FAIL` among the necessary axioms;
/// A7 to A9 are run for information only.
pub fn roundtrip_suite(values: &[Vec<f64>], m: &MobiusRep, opts: &RoundtripOptions) -> RoundtripReport {
    let mut report = RoundtripReport { seed: opts.seed, stages: Vec::new(), axioms: Vec::new(), fitted: None, fitted_kind: None };
    let push = |report: &mut RoundtripReport, stage, passed, detail: String| {
        report.stages.push(StageOutcome { stage, passed, detail });
        passed
    };

    let model = match ProductModel::from_values(values.to_vec()) {
        Ok(model) if model.n() == m.n() => model,
        Ok(model) => {
            push(&mut report, Stage::Validate, false, format!("model has {} criteria, capacity {}", model.n(), m.n()));
            return report;
        }
        Err(e) => {
            push(&mut report, Stage::Validate, false, format!("{e}"));
            return report;
        }
    };
    let violations = m.validate(opts.tolerance);
    if !push(&mut report, Stage::Validate, violations.is_empty(), format!("{} capacity violations", violations.len())) {
        return report;
    }

    let alts = match enumerate_grid(&model) {
        Ok(a) => a,
        Err(e) => {
            push(&mut report, Stage::Induce, false, format!("{e}"));
            return report;
        }
    };
    let prefs = match induced_order(m, &model, &alts) {
        Ok(p) => p,
        Err(e) => {
            push(&mut report, Stage::Induce, false, format!("{e}"));
            return report;
        }
    };
    let original: Vec<i64> = prefs.ranks().unwrap_or_default().to_vec();
    let classes = original.iter().max().map_or(0, |r| r + 1);
    push(&mut report, Stage::Induce, true, format!("{} alternatives in {classes} classes", alts.len()));

    let mut which: Vec<AxiomId> = NECESSARY.to_vec();
    which.extend([AxiomId::A7, AxiomId::A8, AxiomId::A9]);
    report.axioms = run_checks(&prefs, &which, &opts.check);
    let failed: Vec<String> = report
        .axioms
        .iter()
        .filter(|r| NECESSARY.contains(&r.axiom) && r.status == Status::Fail)
        .map(|r| String::from(r.axiom.name()))
        .collect();
    let open = report.axioms.iter().filter(|r| NECESSARY.contains(&r.axiom) && r.status == Status::Undetermined).count();
    let detail = if failed.is_empty() { format!("{open} undetermined") } else { format!("failed: {}", failed.join(", ")) };
    // later stages do not depend on the axioms, so they still run
    push(&mut report, Stage::Axioms, failed.is_empty(), detail);

    let problem = match opts.epsilon {
        Some(eps) => FitProblem::new(prefs.clone(), eps),
        None => FitProblem::with_default_epsilon(prefs.clone()),
    };
    let fit = match problem.and_then(|p| fit_capacity(&p)) {
        Ok(f) => f,
        Err(e) => {
            push(&mut report, Stage::Fit, false, format!("{e}"));
            return report;
        }
    };
    let fitted = match (fit.status, fit.mobius) {
        (FitStatus::Feasible, Some(mobius)) => mobius,
        _ => {
            push(&mut report, Stage::Fit, false, format!("infeasible, max violation {:.3e}", fit.max_violation));
            return report;
        }
    };
    let kind = classify_special(&fitted, opts.tolerance);
    push(&mut report, Stage::Fit, true, format!("feasible, slack {:.3e}, {kind:?}", fit.min_slack));
    report.fitted_kind = Some(kind);

    let refit = induced_order(&fitted, &model, &alts).ok().and_then(|p| p.ranks().map(<[i64]>::to_vec));
    let verified = verify_representation(&fitted, &prefs, opts.tolerance);
    report.fitted = Some(fitted);
    let same = refit.as_deref() == Some(&original[..]);
    match verified {
        Ok(v) => push(
            &mut report,
            Stage::Verify,
            v.holds() && same,
            format!("{} of {} comparisons mismatched, rank vector {}", v.mismatches.len(), v.checked, if same { "reproduced" } else { "changed" }),
        ),
        Err(e) => push(&mut report, Stage::Verify, false, format!("{e}")),
    };

    let cliques = cliques_from_mobius(m, opts.tolerance);
    let mut r = rng(opts.seed);
    let mut broken = 0;
    let mut errors = Vec::new();
    for _ in 0..opts.transforms {
        let t = CliqueTransform {
            scale: cliques.iter().map(|_| r.random_range(0.2..=5.0)).collect(),
            shift: cliques.iter().map(|_| r.random_range(-2.0..=2.0)).collect(),
            cliques: cliques.clone(),
        };
        let ranks = apply_uniqueness_transform(m, &model, &t)
            .and_then(|(m2, model2)| induced_order(&m2, &model2, &alts))
            .map(|p| p.ranks().map(<[i64]>::to_vec));
        match ranks {
            Ok(rk) if rk.as_deref() == Some(&original[..]) => {}
            Ok(_) => broken += 1,
            Err(e) => errors.push(format!("{e}")),
        }
    }
    let detail = match errors.first() {
        Some(e) => format!("{} transforms failed: {e}", errors.len()),
        None => format!("{broken} of {} transforms over {} cliques changed the order", opts.transforms, cliques.len()),
    };
    push(&mut report, Stage::Transform, broken == 0 && errors.is_empty(), detail);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::Capacity;
    use alloc::vec;

    #[test]
    fn additive_model_passes_every_stage() {
        let m = Capacity::additive(&[0.2, 0.5, 0.3]).unwrap().to_mobius();
        let values = vec![vec![0.0, 1.0, 3.0], vec![1.0, 2.0, 4.0], vec![0.0, 2.0, 3.0]];
        let r = roundtrip_suite(&values, &m, &RoundtripOptions::default());
        assert!(r.passed(), "{:?}", r.stages);
        assert_eq!(r.stages.len(), 6);
        assert_eq!(r.fitted_kind, Some(SpecialCase::Additive));
    }

    #[test]
    fn duplicate_values_stop_at_validation() {
        let m = Capacity::minimum(2).unwrap().to_mobius();
        let r = roundtrip_suite(&[vec![0.0, 1.0, 1.0], vec![0.0, 1.0]], &m, &RoundtripOptions::default());
        assert_eq!(r.stages.len(), 1);
        assert_eq!(r.first_failure().unwrap().stage, Stage::Validate);
    }

    #[test]
    fn min_capacity_refits_the_ranks() {
        let m = Capacity::minimum(2).unwrap().to_mobius();
        let f = vec![0.0, 1.0, 2.0, 3.0];
        let r = roundtrip_suite(&[f.clone(), f], &m, &RoundtripOptions::default());
        for stage in [Stage::Validate, Stage::Induce, Stage::Fit, Stage::Verify, Stage::Transform] {
            assert!(r.stages.iter().any(|s| s.stage == stage && s.passed), "{stage}: {:?}", r.stages);
        }
    }
}
