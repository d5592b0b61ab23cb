//! Weak separability and pointwise monotonicity.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{AxiomId, AxiomReport, CheckOptions, Tally, Witness};
use crate::prefs::{GridRelation, MarginalOrder, PreferenceStructure};

pub fn check_weak_separability(prefs: &PreferenceStructure, opts: &CheckOptions) -> AxiomReport {
    match prefs.relation() {
        Ok(rel) => weak_separability(&rel, opts),
        Err(e) => AxiomReport::undetermined(AxiomId::A2, format!("{e}")),
    }
}

pub(crate) fn weak_separability(rel: &GridRelation, opts: &CheckOptions) -> AxiomReport {
    let grid = rel.grid();
    let mut tally = Tally::new(AxiomId::A2, opts);
    for i in 0..grid.n() {
        let d = grid.dims()[i];
        let contexts = grid.contexts(&[i]);
        for a in 0..d {
            for b in 0..d {
                if a == b {
                    continue;
                }
                let mut strict = Vec::new();
                let mut reversed = Vec::new();
                for &ctx in &contexts {
                    let (xa, xb) = (grid.with_level(ctx, i, a), grid.with_level(ctx, i, b));
                    match rel.compare(xa, xb) {
                        Some(Ordering::Greater) => strict.push(ctx),
                        Some(Ordering::Less) => reversed.push(ctx),
                        Some(Ordering::Equal) => {}
                        None => tally.unknown(),
                    }
                }
                tally.check((contexts.len() * contexts.len()) as u64);
                for &x in &strict {
                    for &y in &reversed {
                        tally.violation(|| Witness {
                            summary: format!("criterion {i}: a x ≻ b x but b y ≻ a y (a={a}, b={b})"),
                            points: vec![
                                ("a x".into(), grid.coords(grid.with_level(x, i, a))),
                                ("b x".into(), grid.coords(grid.with_level(x, i, b))),
                                ("a y".into(), grid.coords(grid.with_level(y, i, a))),
                                ("b y".into(), grid.coords(grid.with_level(y, i, b))),
                            ],
                        });
                    }
                }
            }
        }
    }
    tally.finish()
}

/// Dominance in every marginal order must imply weak preference.
pub fn check_pointwise_monotonicity(
    prefs: &PreferenceStructure,
    order: &MarginalOrder,
    opts: &CheckOptions,
) -> AxiomReport {
    match prefs.relation() {
        Ok(rel) => pointwise_monotonicity(&rel, order, opts),
        Err(e) => AxiomReport::undetermined(AxiomId::Monotonicity, format!("{e}")),
    }
}

pub(crate) fn pointwise_monotonicity(rel: &GridRelation, order: &MarginalOrder, opts: &CheckOptions) -> AxiomReport {
    let grid = rel.grid();
    let mut tally = Tally::new(AxiomId::Monotonicity, opts);
    let coords: Vec<Vec<usize>> = (0..grid.len()).map(|k| grid.coords(k)).collect();
    for x in 0..grid.len() {
        for y in 0..grid.len() {
            if x == y || !(0..grid.n()).all(|i| order.geq(i, coords[x][i], coords[y][i])) {
                continue;
            }
            tally.check(1);
            match rel.compare(x, y) {
                Some(Ordering::Less) => tally.violation(|| Witness {
                    summary: "x dominates y but y ≻ x".into(),
                    points: vec![("x".into(), coords[x].clone()), ("y".into(), coords[y].clone())],
                }),
                None => tally.unknown(),
                _ => {}
            }
        }
    }
    tally.finish()
}
