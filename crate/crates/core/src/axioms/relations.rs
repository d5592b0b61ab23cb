//! Coordinate relations `R^z`, `S^z`, `E^z` derived from cone cancellation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::cone::{ConeOutcome, Side, cone_3c, cone_levels, cone_witness};
use super::{AxiomId, AxiomReport, CheckOptions, Tally, Witness};
use crate::error::Error;
use crate::prefs::{GridRelation, MarginalFailure, MarginalOrder, PreferenceStructure, marginal_order_from};
use crate::product::Grid;
use crate::subset::{Subset, UnionFind};

/// `i R^z j` flags for every grid point and ordered pair; `None` when the
/// data leave the cone undecided.
#[derive(Clone, Debug)]
pub struct ConeRelationTable {
    grid: Grid,
    order: MarginalOrder,
    r: Vec<Option<bool>>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error(transparent)]
    Data(#[from] Error),
    #[error("marginal orders unavailable: {0}")]
    Marginal(MarginalFailure),
}

impl ConeRelationTable {
    /// Table with explicit flags, `r[(z * n + i) * n + j]`.
    pub fn from_flags(grid: Grid, order: MarginalOrder, r: Vec<Option<bool>>) -> Self {
        assert_eq!(r.len(), grid.len() * grid.n() * grid.n());
        ConeRelationTable { grid, order, r }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn order(&self) -> &MarginalOrder {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    /// `i R^z j`.
    pub fn r(&self, z: usize, i: usize, j: usize) -> Option<bool> {
        if i == j {
            return Some(true);
        }
        self.r[(z * self.n() + i) * self.n() + j]
    }

    /// `i S^z j`, i.e. not `j R^z i`.
    pub fn s(&self, z: usize, i: usize, j: usize) -> Option<bool> {
        if i == j {
            return Some(false);
        }
        self.r(z, j, i).map(|v| !v)
    }

    /// `i E^z j`.
    pub fn e(&self, z: usize, i: usize, j: usize) -> Option<bool> {
        match (self.r(z, i, j), self.r(z, j, i)) {
            (Some(true), Some(true)) => Some(true),
            (Some(false), _) | (_, Some(false)) => Some(false),
            _ => None,
        }
    }

    /// Ordered pairs `(i, j)` with `i S^z j`, or `None` if any flag is undecided.
    pub fn strict_pairs(&self, z: usize) -> Option<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in 0..self.n() {
                if i != j && self.s(z, i, j)? {
                    out.push((i, j));
                }
            }
        }
        Some(out)
    }
}

/// Builds the table with marginal orders derived from the data; levels that
/// collapse are kept as ties.
pub fn build_relation_table(prefs: &PreferenceStructure) -> Result<ConeRelationTable, TableError> {
    let rel = prefs.relation()?;
    let order = match marginal_order_from(&rel) {
        Ok(o) => o,
        Err(f) => match f.weak_order.clone() {
            Some(o) => o,
            None => return Err(TableError::Marginal(f)),
        },
    };
    Ok(build_relation_table_from(&rel, &order))
}

pub fn build_relation_table_from(rel: &GridRelation, order: &MarginalOrder) -> ConeRelationTable {
    let grid = rel.grid().clone();
    let n = grid.n();
    let mut r = vec![None; grid.len() * n * n];
    for z in 0..grid.len() {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    r[(z * n + i) * n + j] = Some(true);
                    continue;
                }
                let (il, jl) = cone_levels(order, grid.level(z, i), grid.level(z, j), i, j, Side::SE);
                r[(z * n + i) * n + j] = match cone_3c(rel, z, i, j, &il, &jl).0 {
                    ConeOutcome::Holds => Some(true),
                    ConeOutcome::Violated(_) => Some(false),
                    ConeOutcome::Undetermined => None,
                };
            }
        }
    }
    ConeRelationTable { grid, order: order.clone(), r }
}

/// Completeness of `R^z`; witnesses carry a failing instance from each cone
/// when the preference data are supplied.
pub fn check_a3(table: &ConeRelationTable, rel: Option<&GridRelation>, opts: &CheckOptions) -> AxiomReport {
    let grid = table.grid();
    let mut tally = Tally::new(AxiomId::A3, opts);
    for z in 0..grid.len() {
        for i in 0..table.n() {
            for j in i + 1..table.n() {
                tally.check(1);
                match (table.r(z, i, j), table.r(z, j, i)) {
                    (Some(false), Some(false)) => tally.violation(|| {
                        let mut w = Witness {
                            summary: format!("{i}{j}-triple cancellation fails on both cones at z"),
                            points: vec![("z".into(), grid.coords(z))],
                        };
                        if let Some(rel) = rel {
                            for (a, b) in [(i, j), (j, i)] {
                                let (il, jl) = cone_levels(table.order(), grid.level(z, a), grid.level(z, b), a, b, Side::SE);
                                if let ConeOutcome::Violated(t) = cone_3c(rel, z, a, b, &il, &jl).0 {
                                    let cw = cone_witness(grid, z, a, b, t);
                                    w.points.extend(cw.points.into_iter().map(|(k, p)| (format!("{a}{b}: {k}"), p)));
                                }
                            }
                        }
                        w
                    }),
                    (Some(true), _) | (_, Some(true)) => {}
                    _ => tally.unknown(),
                }
            }
        }
    }
    tally.finish()
}

/// `i S^z j S^z … S^z k ⇒ i R^z k` for chains of at least two steps.
pub fn check_acyclicity(table: &ConeRelationTable, opts: &CheckOptions) -> AxiomReport {
    let grid = table.grid();
    let n = table.n();
    let mut tally = Tally::new(AxiomId::A3Acycl, opts);
    for z in 0..grid.len() {
        let mut undecided = false;
        let mut succ = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                match table.s(z, i, j) {
                    Some(true) => succ[i].push(j),
                    Some(false) => {}
                    None => undecided = true,
                }
            }
        }
        for start in 0..n {
            // parent pointers of a breadth-first search over S-edges, tracking path length
            let mut parent = vec![usize::MAX; n];
            let mut depth = vec![usize::MAX; n];
            let mut frontier = vec![start];
            depth[start] = 0;
            let mut reached_long = vec![false; n];
            let mut long_parent = vec![usize::MAX; n];
            while let Some(u) = frontier.pop() {
                for &v in &succ[u] {
                    if depth[u] >= 1 && !reached_long[v] {
                        reached_long[v] = true;
                        long_parent[v] = u;
                    }
                    if depth[v] == usize::MAX {
                        depth[v] = depth[u] + 1;
                        parent[v] = u;
                        frontier.insert(0, v);
                    }
                }
            }
            for k in 0..n {
                if k == start || !reached_long[k] {
                    continue;
                }
                tally.check(1);
                if table.r(z, start, k) == Some(false) {
                    tally.violation(|| {
                        let mut path = vec![k];
                        let mut cur = long_parent[k];
                        while cur != start && cur != usize::MAX {
                            path.push(cur);
                            cur = parent[cur];
                        }
                        path.push(start);
                        path.reverse();
                        let chain: Vec<alloc::string::String> = path.iter().map(|c| format!("{c}")).collect();
                        Witness {
                            summary: format!("S-chain {} at z but not {start} R {k}", chain.join(" S ")),
                            points: vec![("z".into(), grid.coords(z))],
                        }
                    });
                }
            }
        }
        if undecided {
            tally.unknown();
        }
    }
    tally.finish()
}

/// Interaction cliques: blocks of the transitive closure of "`i S^z j` or
/// `j S^z i` for some `z`".
pub fn interaction_cliques_from_prefs(table: &ConeRelationTable) -> Vec<Subset> {
    let n = table.n();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let interacting = (0..table.grid().len())
                .any(|z| table.s(z, i, j) == Some(true) || table.s(z, j, i) == Some(true));
            if interacting {
                uf.union(i, j);
            }
        }
    }
    uf.blocks()
}
