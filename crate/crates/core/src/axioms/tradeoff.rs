//! Intra-coordinate trade-off consistency.
//!
//! For criterion `i` a tuple is levels `a, b, c, d` and contexts
//! `x, y, w, z`. Premises `a x ≼ b y`, `a w ≽ b z`, `c x ≽ d y`; the
//! conclusion `c w ≽ d z` is required when the eight points sit in cells as
//! one of the provisos asks. Rows of the matrices below are level pairs,
//! columns are context pairs ("rods").

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cells::{CellIndex, PartitionCell};
use super::{AxiomId, AxiomReport, BitMatrix, CheckOptions, Tally, Witness, find_cancellation};
use crate::prefs::GridRelation;

const PROVISOS: [&str; 3] = ["a", "b", "c"];

struct Layout {
    i: usize,
    levels: usize,
    contexts: Vec<usize>,
}

impl Layout {
    fn pt(&self, rel: &GridRelation, a: usize, ctx: usize) -> usize {
        rel.grid().with_level(self.contexts[ctx], self.i, a)
    }

    fn split(&self, r: usize, c: usize) -> (usize, usize, usize, usize) {
        let k = self.contexts.len();
        (r / self.levels, r % self.levels, c / k, c % k)
    }
}

struct Relations {
    le: BitMatrix,
    ge: BitMatrix,
    lt: BitMatrix,
    unknown: bool,
}

fn relations(rel: &GridRelation, lay: &Layout) -> Relations {
    let (l, k) = (lay.levels, lay.contexts.len());
    let mut out = Relations {
        le: BitMatrix::new(l * l, k * k),
        ge: BitMatrix::new(l * l, k * k),
        lt: BitMatrix::new(l * l, k * k),
        unknown: false,
    };
    for a in 0..l {
        for b in 0..l {
            for x in 0..k {
                for y in 0..k {
                    let (r, c) = (a * l + b, x * k + y);
                    match rel.compare(lay.pt(rel, a, x), lay.pt(rel, b, y)) {
                        Some(Ordering::Less) => {
                            out.le.set(r, c);
                            out.lt.set(r, c);
                        }
                        Some(Ordering::Equal) => {
                            out.le.set(r, c);
                            out.ge.set(r, c);
                        }
                        Some(Ordering::Greater) => out.ge.set(r, c),
                        None => out.unknown = true,
                    }
                }
            }
        }
    }
    out
}

/// Pairs `(a x, b y)` with both points in `cell`.
fn pair_mask(rel: &GridRelation, lay: &Layout, cell: &PartitionCell) -> BitMatrix {
    let (l, k) = (lay.levels, lay.contexts.len());
    let mut m = BitMatrix::new(l * l, k * k);
    for a in 0..l {
        for x in 0..k {
            if !cell.contains(lay.pt(rel, a, x)) {
                continue;
            }
            for b in 0..l {
                for y in 0..k {
                    if cell.contains(lay.pt(rel, b, y)) {
                        m.set(a * l + b, x * k + y);
                    }
                }
            }
        }
    }
    m
}

fn witness(rel: &GridRelation, lay: &Layout, proviso: &str, cells: (usize, usize), hit: (usize, usize, usize, usize)) -> Witness {
    let (r1, r2, c1, c2) = hit;
    let (a, b, x, y) = lay.split(r1, c1);
    let (c, d, w, z) = lay.split(r2, c2);
    let g = rel.grid();
    let named = |name: &str, lvl: usize, ctx: usize| (String::from(name), g.coords(lay.pt(rel, lvl, ctx)));
    Witness {
        summary: format!(
            "criterion {}, proviso ({proviso}) with cells {} and {}: a x ≼ b y, a w ≽ b z, c x ≽ d y but c w ≺ d z",
            lay.i, cells.0, cells.1
        ),
        points: vec![
            named("a x", a, x),
            named("b y", b, y),
            named("a w", a, w),
            named("b z", b, z),
            named("c x", c, x),
            named("d y", d, y),
            named("c w", c, w),
            named("d z", d, z),
        ],
    }
}

/// Audits every tuple matched by one of the three provisos.
///
/// Proviso (a) does not ask for `i` to be essential on the shared cell;
/// (b) and (c) do. The note lists violation counts per proviso.
pub fn check_a4(rel: &GridRelation, cells: &[PartitionCell], opts: &CheckOptions) -> AxiomReport {
    let grid = rel.grid();
    let mut tally = Tally::new(AxiomId::A4, opts);
    let layouts: Vec<Layout> = (0..grid.n())
        .map(|i| Layout { i, levels: grid.dims()[i], contexts: grid.contexts(&[i]) })
        .collect();

    let cost: u64 = layouts
        .iter()
        .map(|lay| {
            let rows = (lay.levels * lay.levels) as u64;
            let words = (lay.contexts.len() * lay.contexts.len()).div_ceil(64) as u64;
            let ess = cells.iter().filter(|c| c.essential[lay.i]).count() as u64;
            rows * rows * words * (cells.len() as u64) * (1 + 2 * ess)
        })
        .fold(0u64, u64::saturating_add);
    if cost > opts.budget {
        return sample_a4(rel, cells, &layouts, opts);
    }

    let mut per_proviso = [0u64; 3];
    for lay in &layouts {
        let base = relations(rel, lay);
        if base.unknown {
            tally.unknown();
        }
        let all_rows = vec![true; lay.levels * lay.levels];
        let masked: Vec<[BitMatrix; 3]> = cells
            .iter()
            .map(|cell| {
                let m = pair_mask(rel, lay, cell);
                [base.le.masked(&all_rows, &m), base.ge.masked(&all_rows, &m), base.lt.masked(&all_rows, &m)]
            })
            .collect();
        let t = (lay.levels * lay.contexts.len()) as u64;
        tally.check(t.saturating_pow(4));
        for (k, mk) in masked.iter().enumerate() {
            let [le, ge, lt] = mk;
            if let (_, Some(hit)) = find_cancellation(le, ge, ge, lt) {
                per_proviso[0] += 1;
                tally.violation(|| witness(rel, lay, PROVISOS[0], (k, k), hit));
            }
        }
        for (j, cell) in cells.iter().enumerate() {
            if !cell.essential[lay.i] {
                continue;
            }
            let [le_j, ge_j, _] = &masked[j];
            for (k, mk) in masked.iter().enumerate() {
                let [_, ge_k, lt_k] = mk;
                if let (_, Some(hit)) = find_cancellation(le_j, ge_k, ge_j, lt_k) {
                    per_proviso[1] += 1;
                    tally.violation(|| witness(rel, lay, PROVISOS[1], (j, k), hit));
                }
                if let (_, Some(hit)) = find_cancellation(le_j, ge_j, ge_k, lt_k) {
                    per_proviso[2] += 1;
                    tally.violation(|| witness(rel, lay, PROVISOS[2], (j, k), hit));
                }
            }
        }
    }
    tally.note(format!(
        "violating cell combinations by proviso: a={}, b={}, c={}; essentiality not required in (a)",
        per_proviso[0], per_proviso[1], per_proviso[2]
    ));
    tally.finish()
}

fn sample_a4(rel: &GridRelation, cells: &[PartitionCell], layouts: &[Layout], opts: &CheckOptions) -> AxiomReport {
    let grid = rel.grid();
    let mut tally = Tally::new(AxiomId::A4, opts);
    let index = CellIndex::new(cells, grid.len());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let universe: f64 = layouts.iter().map(|lay| { let t = (lay.levels * lay.contexts.len()) as f64; t * t * t * t }).sum();
    let samples = (opts.budget / 16).max(1);
    let essential = |c: usize, i: usize| cells[c].essential[i];
    for _ in 0..samples {
        let lay = &layouts[rng.random_range(0..layouts.len())];
        let lv: [usize; 4] = core::array::from_fn(|_| rng.random_range(0..lay.levels));
        let cx: [usize; 4] = core::array::from_fn(|_| rng.random_range(0..lay.contexts.len()));
        let [a, b, c, d] = lv;
        let [x, y, w, z] = cx;
        let p = |l: usize, t: usize| lay.pt(rel, l, t);
        let pts = [p(a, x), p(b, y), p(a, w), p(b, z), p(c, x), p(d, y), p(c, w), p(d, z)];
        tally.check(1);
        let matched = if index.common(&pts).is_some() {
            Some((PROVISOS[0], index.common(&pts).unwrap_or(0), index.common(&pts).unwrap_or(0)))
        } else {
            let lower = |s: &[usize]| index.all_common(s).into_iter().find(|&j| essential(j, lay.i));
            let first = [pts[0], pts[1], pts[2], pts[3]];
            let second = [pts[4], pts[5], pts[6], pts[7]];
            let rows = [pts[0], pts[1], pts[4], pts[5]];
            let cols = [pts[2], pts[3], pts[6], pts[7]];
            if let (Some(j), Some(k)) = (lower(&first), index.common(&second)) {
                Some((PROVISOS[1], j, k))
            } else if let (Some(j), Some(k)) = (lower(&rows), index.common(&cols)) {
                Some((PROVISOS[2], j, k))
            } else {
                None
            }
        };
        let Some((proviso, j, k)) = matched else { continue };
        let cmp = |u: usize, v: usize| rel.compare(pts[u], pts[v]);
        let premises = [cmp(0, 1).map(|o| o != Ordering::Greater), cmp(2, 3).map(|o| o != Ordering::Less), cmp(4, 5).map(|o| o != Ordering::Less)];
        if premises.contains(&Some(false)) {
            continue;
        }
        match (premises.contains(&None), cmp(6, 7)) {
            (false, Some(Ordering::Less)) => tally.violation(|| {
                let k_ctx = lay.contexts.len();
                witness(rel, lay, proviso, (j, k), (a * lay.levels + b, c * lay.levels + d, x * k_ctx + y, w * k_ctx + z))
            }),
            (false, Some(_)) => {}
            _ => tally.unknown(),
        }
    }
    let coverage = (samples as f64 / universe).min(1.0);
    tally.sampled(coverage);
    tally.note(format!("sampled {samples} random tuples; essentiality not required in (a)"));
    tally.finish()
}
