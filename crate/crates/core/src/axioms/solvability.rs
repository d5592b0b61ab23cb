//! Restricted solvability (informational) and the Archimedean condition.

use alloc::format;
use core::cmp::Ordering;

use super::{AxiomId, AxiomReport, CheckOptions, Status};
use crate::prefs::GridRelation;

/// Counts sandwiches `a x ≽ y ≽ b x` and how many have some `c` with `c x ∼ y`.
///
/// Finite grids rarely satisfy the condition, so an incomplete count is
/// reported as `NotApplicable` rather than a failure.
pub fn check_restricted_solvability(rel: &GridRelation, opts: &CheckOptions) -> AxiomReport {
    let grid = rel.grid();
    let (mut total, mut solvable, mut undecided) = (0u64, 0u64, false);
    let mut lookups = 0u64;
    'outer: for i in 0..grid.n() {
        let d = grid.dims()[i];
        for ctx in grid.contexts(&[i]) {
            for y in 0..grid.len() {
                if !rel.covered(y) {
                    continue;
                }
                let (mut above, mut below, mut hit) = (0u64, 0u64, false);
                for a in 0..d {
                    match rel.compare(grid.with_level(ctx, i, a), y) {
                        Some(Ordering::Greater) => above += 1,
                        Some(Ordering::Less) => below += 1,
                        Some(Ordering::Equal) => {
                            above += 1;
                            below += 1;
                            hit = true;
                        }
                        None => undecided = true,
                    }
                }
                lookups += d as u64;
                total += above * below;
                if hit {
                    solvable += above * below;
                }
                if lookups > opts.budget {
                    undecided = true;
                    break 'outer;
                }
            }
        }
    }
    let status = if undecided {
        Status::Undetermined
    } else if solvable == total {
        Status::Pass
    } else {
        Status::NotApplicable
    };
    let note = if total == 0 {
        "no sandwiches; vacuous".into()
    } else {
        format!("informational: {solvable} of {total} sandwiches have an exact solving level")
    };
    AxiomReport {
        axiom: AxiomId::A8,
        status,
        witnesses: alloc::vec::Vec::new(),
        checked: total,
        violated: total - solvable,
        coverage: if undecided { 0.0 } else { 1.0 },
        note: Some(note),
    }
}

pub fn check_archimedean() -> AxiomReport {
    AxiomReport::not_applicable(
        AxiomId::A9,
        "not testable on finite data: every standard sequence on a finite grid is bounded and finite",
    )
}
