//! Inter-coordinate trade-off consistency, audited through standard sequences.
//!
//! A standard sequence on criterion `i` is a run of levels `g^0, g^1, ...`
//! with `g^k y1 z ∼ g^{k+1} y0 z` for fixed `y0 ≁_j y1` on another criterion
//! `j` and a fixed context `z` on the rest. Two sequences whose base points
//! `g^k y0 z` are equivalent at two consecutive steps must stay equivalent
//! at every common step.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cells::{CellIndex, PartitionCell};
use super::{AxiomId, AxiomReport, CheckOptions, Tally, Witness};
use crate::prefs::{GridRelation, MarginalOrder};

/// Upper bound on enumerated sequences before the check gives up on completeness.
pub const MAX_SEQUENCES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardSequence {
    pub criterion: usize,
    pub rod: usize,
    /// Grid points `g^k y0 z`, in step order.
    pub base: Vec<usize>,
}

struct Enumeration {
    sequences: Vec<StandardSequence>,
    truncated: bool,
    unknown: bool,
}

struct Group<'a> {
    rel: &'a GridRelation,
    index: &'a CellIndex,
    i: usize,
    y0: usize,
    y1: usize,
}

impl Group<'_> {
    fn p(&self, g: usize, y: usize) -> usize {
        self.rel.grid().with_level(y, self.i, g)
    }

    fn intersect(&self, mask: &[u64], z: usize) -> Vec<u64> {
        mask.iter().zip(self.index.of(z)).map(|(a, b)| a & b).collect()
    }
}

/// Every maximal standard sequence of at least three steps whose points
/// (including each base point) share a cell.
fn enumerate(rel: &GridRelation, order: &MarginalOrder, cells: &[PartitionCell], cap: usize) -> Enumeration {
    let grid = rel.grid();
    let index = CellIndex::new(cells, grid.len());
    let mut out = Enumeration { sequences: Vec::new(), truncated: false, unknown: false };
    for i in 0..grid.n() {
        let levels = grid.dims()[i];
        for j in (0..grid.n()).filter(|&j| j != i) {
            for ctx in grid.contexts(&[i, j]) {
                for a in 0..grid.dims()[j] {
                    for b in 0..grid.dims()[j] {
                        if order.ranks()[j][a] == order.ranks()[j][b] {
                            continue;
                        }
                        let group = Group {
                            rel,
                            index: &index,
                            i,
                            y0: grid.with_level(ctx, j, a),
                            y1: grid.with_level(ctx, j, b),
                        };
                        let mut succ = vec![Vec::new(); levels];
                        for (g, s) in succ.iter_mut().enumerate() {
                            for h in (0..levels).filter(|&h| h != g) {
                                match rel.compare(group.p(g, group.y1), group.p(h, group.y0)) {
                                    Some(Ordering::Equal) => s.push(h),
                                    Some(_) => {}
                                    None => out.unknown = true,
                                }
                            }
                        }
                        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
                        for g in 0..levels {
                            let mask = index.of(group.p(g, group.y0)).to_vec();
                            if mask.iter().all(|w| *w == 0) {
                                continue;
                            }
                            let mut path = vec![g];
                            extend(&group, &succ, &mut path, mask, &mut found, cap, &mut out.truncated);
                        }
                        // drop proper suffixes of longer sequences
                        let kept: Vec<&Vec<usize>> = found
                            .iter()
                            .filter(|p| !found.iter().any(|q| q.len() > p.len() && q.ends_with(p)))
                            .collect();
                        for p in kept {
                            if out.sequences.len() >= cap {
                                out.truncated = true;
                                return out;
                            }
                            out.sequences.push(StandardSequence {
                                criterion: i,
                                rod: j,
                                base: p.iter().map(|&g| group.p(g, group.y0)).collect(),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn extend(
    group: &Group<'_>,
    succ: &[Vec<usize>],
    path: &mut Vec<usize>,
    mask: Vec<u64>,
    found: &mut BTreeSet<Vec<usize>>,
    cap: usize,
    truncated: &mut bool,
) {
    if found.len() >= cap {
        *truncated = true;
        return;
    }
    let last = *path.last().expect("paths are never empty");
    let step = group.intersect(&mask, group.p(last, group.y1));
    let mut extended = false;
    for &h in &succ[last] {
        if path.contains(&h) {
            continue;
        }
        let next = group.intersect(&step, group.p(h, group.y0));
        if next.iter().all(|w| *w == 0) {
            continue;
        }
        extended = true;
        path.push(h);
        extend(group, succ, path, next, found, cap, truncated);
        path.pop();
    }
    if !extended && path.len() >= 3 {
        found.insert(path.clone());
    }
}

enum PairOutcome {
    Fine,
    Unknown,
    Broken { anchor: usize, step: usize },
}

/// `h` is read with offset `t`: step `k` of `g` meets step `k + t` of `h`.
fn audit_pair(rel: &GridRelation, g: &[usize], h: &[usize], t: isize) -> (PairOutcome, u64) {
    let lo = 0.max(-t) as usize;
    let hi = (g.len() as isize).min(h.len() as isize - t);
    if hi - (lo as isize) < 3 {
        return (PairOutcome::Fine, 0);
    }
    let hi = hi as usize;
    let cmp: Vec<Option<Ordering>> = (lo..hi).map(|k| rel.compare(g[k], h[(k as isize + t) as usize])).collect();
    let work = cmp.len() as u64;
    let Some(anchor) = (0..cmp.len() - 1).find(|&k| cmp[k] == Some(Ordering::Equal) && cmp[k + 1] == Some(Ordering::Equal)) else {
        return (if cmp.contains(&None) { PairOutcome::Unknown } else { PairOutcome::Fine }, work);
    };
    if let Some(step) = cmp.iter().position(|c| matches!(c, Some(o) if *o != Ordering::Equal)) {
        return (PairOutcome::Broken { anchor: anchor + lo, step: step + lo }, work);
    }
    (if cmp.contains(&None) { PairOutcome::Unknown } else { PairOutcome::Fine }, work)
}

fn witness(rel: &GridRelation, g: &StandardSequence, h: &StandardSequence, t: isize, anchor: usize, step: usize) -> Witness {
    let grid = rel.grid();
    let mut points = Vec::new();
    for k in [anchor, anchor + 1, step] {
        points.push((format!("g^{k} y0"), grid.coords(g.base[k])));
        points.push((format!("h^{k} w0"), grid.coords(h.base[(k as isize + t) as usize])));
    }
    Witness {
        summary: format!(
            "sequences on criteria {} and {} agree at steps {anchor} and {} but not at step {step}",
            g.criterion,
            h.criterion,
            anchor + 1
        ),
        points,
    }
}

/// Every pair of cell-contained standard sequences, under every alignment.
pub fn check_a5(rel: &GridRelation, order: &MarginalOrder, cells: &[PartitionCell], opts: &CheckOptions) -> AxiomReport {
    let mut tally = Tally::new(AxiomId::A5, opts);
    let found = enumerate(rel, order, cells, MAX_SEQUENCES);
    if found.unknown {
        tally.unknown();
    }
    let seqs = &found.sequences;
    let shifts = |a: &StandardSequence, b: &StandardSequence| (a.base.len() + b.base.len()) as u64;
    let cost: u64 = seqs
        .iter()
        .enumerate()
        .flat_map(|(x, a)| seqs[x..].iter().map(move |b| shifts(a, b) * a.base.len().min(b.base.len()) as u64))
        .fold(0u64, u64::saturating_add);

    let audit = |tally: &mut Tally, x: usize, y: usize| {
        let (g, h) = (&seqs[x], &seqs[y]);
        let range = -(g.base.len() as isize) + 1..h.base.len() as isize;
        for t in range {
            if x == y && t == 0 {
                continue;
            }
            let (outcome, work) = audit_pair(rel, &g.base, &h.base, t);
            if work == 0 {
                continue;
            }
            tally.check(1);
            match outcome {
                PairOutcome::Fine => {}
                PairOutcome::Unknown => tally.unknown(),
                PairOutcome::Broken { anchor, step } => tally.violation(|| witness(rel, g, h, t, anchor, step)),
            }
        }
    };

    if cost <= opts.budget {
        for x in 0..seqs.len() {
            for y in x..seqs.len() {
                audit(&mut tally, x, y);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let pairs = seqs.len() as f64 * (seqs.len() as f64 + 1.0) / 2.0;
        let draws = (opts.budget / 64).max(1);
        for _ in 0..draws {
            let x = rng.random_range(0..seqs.len());
            let y = rng.random_range(0..seqs.len());
            audit(&mut tally, x.min(y), x.max(y));
        }
        tally.sampled((draws as f64 / pairs).min(1.0));
    }
    if found.truncated {
        tally.sampled(0.0);
    }
    tally.note(format!(
        "{} standard sequences of length ≥ 3{}",
        seqs.len(),
        if found.truncated { format!(", enumeration stopped at {MAX_SEQUENCES}") } else { alloc::string::String::new() }
    ));
    tally.finish()
}
