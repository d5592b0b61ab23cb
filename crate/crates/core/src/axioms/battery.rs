//! Shared setup for running several checks on one preference structure.

use alloc::format;
use alloc::vec::Vec;

use super::cells::{Partition, partition_cells};
use super::relations::{ConeRelationTable, TableError, build_relation_table_from, check_a3, check_acyclicity};
use super::separability::{pointwise_monotonicity, weak_separability};
use super::{
    AxiomId, AxiomReport, CheckOptions, check_a4, check_a5, check_a6, check_archimedean, check_essentiality,
    check_restricted_solvability, check_weak_order,
};
use crate::prefs::{GridRelation, MarginalOrder, PreferenceStructure, marginal_order_from};

/// Axioms every order induced by a Choquet integral is expected to satisfy.
pub const NECESSARY: [AxiomId; 8] = [
    AxiomId::A1,
    AxiomId::A2,
    AxiomId::A3,
    AxiomId::A3Acycl,
    AxiomId::A4,
    AxiomId::A5,
    AxiomId::A6,
    AxiomId::Monotonicity,
];

/// Relation, marginal orders, cone relations and cells of one data set.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub rel: GridRelation,
    pub order: MarginalOrder,
    pub table: ConeRelationTable,
    pub partition: Partition,
}

impl Analysis {
    /// Collapsed levels are kept as ties; reversals or gaps in the marginal
    /// orders are an error.
    pub fn new(prefs: &PreferenceStructure) -> Result<Self, TableError> {
        let rel = prefs.relation()?;
        let order = match marginal_order_from(&rel) {
            Ok(o) => o,
            Err(f) => f.weak_order.clone().ok_or(TableError::Marginal(f))?,
        };
        let table = build_relation_table_from(&rel, &order);
        let partition = partition_cells(&table, &rel);
        Ok(Analysis { rel, order, table, partition })
    }
}

/// Runs the listed checks, in order. Checks needing marginal orders report
/// `Undetermined` when those cannot be derived.
pub fn run_checks(prefs: &PreferenceStructure, which: &[AxiomId], opts: &CheckOptions) -> Vec<AxiomReport> {
    let mut analysis: Option<Result<Analysis, TableError>> = None;
    let mut out = Vec::with_capacity(which.len());
    for &axiom in which {
        let report = match axiom {
            AxiomId::A1 => check_weak_order(prefs, opts),
            AxiomId::A2 => match prefs.relation() {
                Ok(rel) => weak_separability(&rel, opts),
                Err(e) => AxiomReport::undetermined(axiom, format!("{e}")),
            },
            AxiomId::A9 => check_archimedean(),
            AxiomId::Cone3C => AxiomReport::not_applicable(axiom, "needs a cone; run the single-cone check instead"),
            _ => {
                let a = analysis.get_or_insert_with(|| Analysis::new(prefs));
                match a {
                    Err(e) => AxiomReport::undetermined(axiom, format!("no marginal orders: {e}")),
                    Ok(a) => {
                        let cells = &a.partition.cells;
                        let mut r = match axiom {
                            AxiomId::A3 => check_a3(&a.table, Some(&a.rel), opts),
                            AxiomId::A3Acycl => check_acyclicity(&a.table, opts),
                            AxiomId::A4 => check_a4(&a.rel, cells, opts),
                            AxiomId::A5 => check_a5(&a.rel, &a.order, cells, opts),
                            AxiomId::A6 => check_a6(&a.rel, cells, opts),
                            AxiomId::A7 => check_essentiality(&a.rel, cells, &a.order, opts),
                            AxiomId::A8 => check_restricted_solvability(&a.rel, opts),
                            _ => pointwise_monotonicity(&a.rel, &a.order, opts),
                        };
                        if matches!(axiom, AxiomId::A4 | AxiomId::A5 | AxiomId::A6) && !a.partition.covers_grid() {
                            let extra = format!(
                                "cells leave {} points uncovered and {} undecided",
                                a.partition.uncovered.len(),
                                a.partition.undecided.len()
                            );
                            r.note = Some(match r.note.take() {
                                Some(n) => format!("{n}; {extra}"),
                                None => extra,
                            });
                        }
                        r
                    }
                }
            }
        };
        out.push(report);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::Status;
    use crate::capacity::Capacity;
    use crate::prefs::induced_order;
    use crate::product::{ProductModel, enumerate_grid};

    #[test]
    fn additive_order_passes_the_necessary_list() {
        let m = Capacity::additive(&[0.2, 0.5, 0.3]).unwrap().to_mobius();
        let model = ProductModel::from_values(alloc::vec![alloc::vec![0.0, 1.0, 3.0]; 3]).unwrap();
        let p = induced_order(&m, &model, &enumerate_grid(&model).unwrap()).unwrap();
        let reports = run_checks(&p, &NECESSARY, &CheckOptions::default());
        assert_eq!(reports.len(), NECESSARY.len());
        for r in &reports {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn missing_marginals_leave_dependent_checks_open() {
        use crate::prefs::{PairStatement, PreferenceData};
        let model = ProductModel::from_values(alloc::vec![alloc::vec![0.0, 1.0]; 2]).unwrap();
        let alts = alloc::vec![alloc::vec![0, 0], alloc::vec![1, 1]];
        let pairs = alloc::vec![PairStatement { better: 1, worse: 0, strict: true }];
        let p = PreferenceStructure::new(model, alts, PreferenceData::Pairs(pairs)).unwrap();
        let r = run_checks(&p, &[AxiomId::A4, AxiomId::A9], &CheckOptions::default());
        assert_eq!(r[0].status, Status::Undetermined);
        assert_eq!(r[1].status, Status::NotApplicable);
    }
}
