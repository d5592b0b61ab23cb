//! Essential criteria, globally and per cell, with per-cell strong monotonicity.

use alloc::format;
use alloc::vec;
use core::cmp::Ordering;

use super::cells::PartitionCell;
use super::{AxiomId, AxiomReport, CheckOptions, Tally, Witness};
use crate::prefs::{GridRelation, MarginalOrder};

/// Whether changing criterion `i` alone ever yields a strict preference
/// between two points of `set`.
pub fn essential_on(rel: &GridRelation, i: usize, set: &[bool]) -> bool {
    let grid = rel.grid();
    (0..grid.len()).filter(|&z| set[z]).any(|z| {
        (0..grid.dims()[i]).any(|a| {
            let x = grid.with_level(z, i, a);
            set[x] && rel.compare(x, z) == Some(Ordering::Greater)
        })
    })
}

/// Every criterion essential on the whole grid; within each cell, every
/// essential criterion strictly monotone in its marginal order.
pub fn check_essentiality(
    rel: &GridRelation,
    cells: &[PartitionCell],
    order: &MarginalOrder,
    opts: &CheckOptions,
) -> AxiomReport {
    let grid = rel.grid();
    let mut tally = Tally::new(AxiomId::A7, opts);
    let everything = vec![true; grid.len()];
    for i in 0..grid.n() {
        tally.check(1);
        if !essential_on(rel, i, &everything) {
            if rel.is_complete_grid() {
                tally.violation(|| Witness {
                    summary: format!("criterion {i} is not essential: no change of its level alone is strictly preferred"),
                    points: vec![],
                });
            } else {
                tally.unknown();
            }
        }
    }
    for (c, cell) in cells.iter().enumerate() {
        for i in 0..grid.n() {
            if !cell.essential[i] {
                continue;
            }
            for &z in &cell.members {
                for a in 0..grid.dims()[i] {
                    let x = grid.with_level(z, i, a);
                    if !cell.contains(x) || !order.gt(i, a, grid.level(z, i)) {
                        continue;
                    }
                    tally.check(1);
                    match rel.compare(x, z) {
                        Some(Ordering::Greater) => {}
                        None => tally.unknown(),
                        Some(_) => tally.violation(|| Witness {
                            summary: format!(
                                "criterion {i} is essential on cell {c} but a strictly better level is not strictly preferred there"
                            ),
                            points: vec![("a x".into(), grid.coords(x)), ("b x".into(), grid.coords(z))],
                        }),
                    }
                }
            }
        }
    }
    tally.finish()
}
