//! Triple cancellation restricted to the cones around a point.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{AxiomId, AxiomReport, BitMatrix, CheckOptions, Tally, Witness, find_cancellation};
use crate::prefs::{GridRelation, MarginalOrder, PreferenceStructure, marginal_order_from};
use crate::product::{Alternative, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `x_i ≽_i z_i` and `z_j ≽_j x_j`.
    SE,
    /// `z_i ≽_i x_i` and `x_j ≽_j z_j`.
    NW,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub z: Alternative,
    pub i: usize,
    pub j: usize,
    pub side: Side,
}

/// Levels of `i` and of `j` spanning the cone.
pub fn cone_levels(order: &MarginalOrder, zi: usize, zj: usize, i: usize, j: usize, side: Side) -> (Vec<usize>, Vec<usize>) {
    let di = order.ranks()[i].len();
    let dj = order.ranks()[j].len();
    match side {
        Side::SE => (
            (0..di).filter(|&a| order.geq(i, a, zi)).collect(),
            (0..dj).filter(|&p| order.geq(j, zj, p)).collect(),
        ),
        Side::NW => (
            (0..di).filter(|&a| order.geq(i, zi, a)).collect(),
            (0..dj).filter(|&p| order.geq(j, p, zj)).collect(),
        ),
    }
}

/// Outcome of one cone audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ConeOutcome {
    Holds,
    /// `(a, b, c, d, p, q, r, s)` as levels.
    Violated([usize; 8]),
    Undetermined,
}

/// 3C on the points `a p z_{-ij}` with `a ∈ ilev`, `p ∈ jlev`; `z` is a grid index.
///
/// A violation needs `a p ≼ b q`, `a r ≽ b s`, `c p ≽ d q` and `c r ≺ d s`.
/// Writing rows for level pairs of `i` and columns for level pairs of `j`,
/// this is a joint hit of the matrices `≼`, `≽` (on `(p,q)` columns) and
/// `≽`, `≺` (on `(r,s)` columns).
pub(crate) fn cone_3c(rel: &GridRelation, z: usize, i: usize, j: usize, ilev: &[usize], jlev: &[usize]) -> (ConeOutcome, u64) {
    let (ni, nj) = (ilev.len(), jlev.len());
    let tuples = (ni * ni * nj * nj) as u64;
    let tuples = tuples * tuples;
    if ni < 2 && nj < 2 {
        return (ConeOutcome::Holds, tuples);
    }
    let grid: &Grid = rel.grid();
    let pt = |a: usize, p: usize| grid.with_level(grid.with_level(z, i, ilev[a]), j, jlev[p]);
    let (rows, cols) = (ni * ni, nj * nj);
    let mut le = BitMatrix::new(rows, cols);
    let mut ge = BitMatrix::new(rows, cols);
    let mut lt = BitMatrix::new(rows, cols);
    let mut unknown = false;
    for a in 0..ni {
        for b in 0..ni {
            for p in 0..nj {
                for q in 0..nj {
                    let (r, c) = (a * ni + b, p * nj + q);
                    match rel.compare(pt(a, p), pt(b, q)) {
                        Some(Ordering::Less) => {
                            le.set(r, c);
                            lt.set(r, c);
                        }
                        Some(Ordering::Equal) => {
                            le.set(r, c);
                            ge.set(r, c);
                        }
                        Some(Ordering::Greater) => ge.set(r, c),
                        None => unknown = true,
                    }
                }
            }
        }
    }
    match find_cancellation(&le, &ge, &ge, &lt).1 {
        Some((ab, cd, pq, rs)) => {
            let l = |k: usize, n: usize, v: &[usize]| v[k / n];
            let h = |k: usize, n: usize, v: &[usize]| v[k % n];
            let tuple = [
                l(ab, ni, ilev),
                h(ab, ni, ilev),
                l(cd, ni, ilev),
                h(cd, ni, ilev),
                l(pq, nj, jlev),
                h(pq, nj, jlev),
                l(rs, nj, jlev),
                h(rs, nj, jlev),
            ];
            (ConeOutcome::Violated(tuple), tuples)
        }
        None if unknown => (ConeOutcome::Undetermined, tuples),
        None => (ConeOutcome::Holds, tuples),
    }
}

pub(crate) fn cone_witness(grid: &Grid, z: usize, i: usize, j: usize, t: [usize; 8]) -> Witness {
    let [a, b, c, d, p, q, r, s] = t;
    let pt = |x: usize, y: usize| grid.coords(grid.with_level(grid.with_level(z, i, x), j, y));
    Witness {
        summary: format!("{i}{j}-triple cancellation fails: a p ≼ b q, a r ≽ b s, c p ≽ d q but c r ≺ d s"),
        points: vec![
            ("a p".into(), pt(a, p)),
            ("b q".into(), pt(b, q)),
            ("a r".into(), pt(a, r)),
            ("b s".into(), pt(b, s)),
            ("c p".into(), pt(c, p)),
            ("d q".into(), pt(d, q)),
            ("c r".into(), pt(c, r)),
            ("d s".into(), pt(d, s)),
        ],
    }
}

/// Audits triple cancellation on one cone; the marginal orders are derived
/// from the data.
pub fn check_3c_on_cone(prefs: &PreferenceStructure, cone: &ConeSpec, opts: &CheckOptions) -> AxiomReport {
    let rel = match prefs.relation() {
        Ok(r) => r,
        Err(e) => return AxiomReport::undetermined(AxiomId::Cone3C, format!("{e}")),
    };
    let order = match marginal_order_from(&rel) {
        Ok(o) => o,
        Err(f) => match f.weak_order {
            Some(o) => o,
            None => return AxiomReport::undetermined(AxiomId::Cone3C, format!("marginal order unavailable: {f}")),
        },
    };
    check_3c_with(&rel, &order, cone, opts)
}

pub fn check_3c_with(rel: &GridRelation, order: &MarginalOrder, cone: &ConeSpec, opts: &CheckOptions) -> AxiomReport {
    let grid = rel.grid();
    let mut tally = Tally::new(AxiomId::Cone3C, opts);
    let z = match grid.try_index(&cone.z) {
        Some(z) if cone.i != cone.j && cone.i < grid.n() && cone.j < grid.n() => z,
        _ => return AxiomReport::undetermined(AxiomId::Cone3C, "cone outside the grid"),
    };
    let (ilev, jlev) = cone_levels(order, cone.z[cone.i], cone.z[cone.j], cone.i, cone.j, cone.side);
    let (outcome, tuples) = cone_3c(rel, z, cone.i, cone.j, &ilev, &jlev);
    tally.check(tuples);
    match outcome {
        ConeOutcome::Holds => {}
        ConeOutcome::Undetermined => tally.unknown(),
        ConeOutcome::Violated(t) => tally.violation(|| cone_witness(grid, z, cone.i, cone.j, t)),
    }
    tally.finish()
}
