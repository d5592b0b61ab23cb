//! Bi-independence within cells.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::cells::PartitionCell;
use super::{AxiomId, AxiomReport, CheckOptions, Tally, Witness};
use crate::prefs::GridRelation;

/// If `a x ≻ b x` with `a x, b x, c x, d x` in one cell and `c y ≻ d y` for
/// some `y`, then `c x ≻ d x`.
pub fn check_a6(rel: &GridRelation, cells: &[PartitionCell], opts: &CheckOptions) -> AxiomReport {
    let grid = rel.grid();
    let mut tally = Tally::new(AxiomId::A6, opts);
    for i in 0..grid.n() {
        let d = grid.dims()[i];
        let contexts = grid.contexts(&[i]);
        // some_strict[c][d] with the context where c y ≻ d y
        let mut some_strict: Vec<Vec<Option<usize>>> = vec![vec![None; d]; d];
        for &ctx in &contexts {
            for c in 0..d {
                for e in 0..d {
                    if some_strict[c][e].is_none()
                        && rel.compare(grid.with_level(ctx, i, c), grid.with_level(ctx, i, e)) == Some(Ordering::Greater)
                    {
                        some_strict[c][e] = Some(ctx);
                    }
                }
            }
        }
        for cell in cells {
            for &ctx in &contexts {
                let inside: Vec<usize> = (0..d).filter(|&a| cell.contains(grid.with_level(ctx, i, a))).collect();
                if inside.len() < 2 {
                    continue;
                }
                let pt = |a: usize| grid.with_level(ctx, i, a);
                let anchor = inside.iter().find_map(|&a| {
                    inside.iter().find(|&&b| rel.compare(pt(a), pt(b)) == Some(Ordering::Greater)).map(|&b| (a, b))
                });
                let Some((a, b)) = anchor else {
                    if inside.iter().any(|&a| inside.iter().any(|&b| rel.compare(pt(a), pt(b)).is_none())) {
                        tally.unknown();
                    }
                    continue;
                };
                for &c in &inside {
                    for &e in &inside {
                        let Some(y) = some_strict[c][e] else { continue };
                        tally.check(1);
                        match rel.compare(pt(c), pt(e)) {
                            Some(Ordering::Greater) => {}
                            None => tally.unknown(),
                            Some(_) => tally.violation(|| Witness {
                                summary: format!(
                                    "criterion {i}: a x ≻ b x and c y ≻ d y but not c x ≻ d x inside one cell"
                                ),
                                points: vec![
                                    ("a x".into(), grid.coords(pt(a))),
                                    ("b x".into(), grid.coords(pt(b))),
                                    ("c x".into(), grid.coords(pt(c))),
                                    ("d x".into(), grid.coords(pt(e))),
                                    ("c y".into(), grid.coords(grid.with_level(y, i, c))),
                                    ("d y".into(), grid.coords(grid.with_level(y, i, e))),
                                ],
                            }),
                        }
                    }
                }
            }
        }
    }
    tally.finish()
}
