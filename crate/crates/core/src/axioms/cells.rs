//! The sets `SE_ij` and the cells `X^{S_a}` they carve out of the grid.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::essentiality::essential_on;
use super::relations::ConeRelationTable;
use crate::prefs::GridRelation;

fn or3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

/// Whether some `x ≽ y` among `levels` has `flag(x)` true and `flag(y)` false.
fn has_switch(levels: &[usize], geq: impl Fn(usize, usize) -> bool, flag: impl Fn(usize) -> Option<bool>) -> Option<bool> {
    let mut undecided = false;
    for &x in levels {
        for &y in levels {
            if !geq(x, y) {
                continue;
            }
            match (flag(x), flag(y)) {
                (Some(true), Some(false)) => return Some(true),
                (Some(false), _) | (_, Some(true)) => {}
                _ => undecided = true,
            }
        }
    }
    if undecided { None } else { Some(false) }
}

/// Membership of every grid point in `SE_ij`.
///
/// Away from the boundary this is `i R^z j`. When `z_i` is maximal, `z`
/// belongs if `j R i` never switches from holding to failing while `z_j` is
/// lowered; when `z_j` is minimal, likewise for raising `z_i`. Degenerate
/// cones along the way are left out of the switch test.
pub fn se_membership(table: &ConeRelationTable, i: usize, j: usize) -> Vec<Option<bool>> {
    let grid = table.grid();
    let order = table.order();
    (0..grid.len())
        .map(|z| {
            let (zi, zj) = (grid.level(z, i), grid.level(z, j));
            let i_max = order.is_max(i, zi);
            let j_min = order.is_min(j, zj);
            let mut member = Some(false);
            if !i_max && !j_min {
                member = or3(member, table.r(z, i, j));
            }
            if i_max {
                // a cone with one level on a side satisfies 3C trivially, so those are skipped
                let below: Vec<usize> = (0..grid.dims()[j]).filter(|&x| order.geq(j, zj, x) && !order.is_max(j, x)).collect();
                let switch = has_switch(&below, |x, y| order.geq(j, x, y), |x| table.r(grid.with_level(z, j, x), j, i));
                member = or3(member, switch.map(|s| !s));
            }
            if j_min {
                let above: Vec<usize> = (0..grid.dims()[i]).filter(|&x| order.geq(i, x, zi) && !order.is_min(i, x)).collect();
                let switch = has_switch(&above, |x, y| order.geq(i, y, x), |x| table.r(grid.with_level(z, i, x), j, i));
                member = or3(member, switch.map(|s| !s));
            }
            member
        })
        .collect()
}

/// `X^{S_a}` for one observed strict coordinate order `S_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionCell {
    /// Pairs `(i, j)` with `i S_a j`.
    pub order: Vec<(usize, usize)>,
    /// Grid indices, ascending.
    pub members: Vec<usize>,
    /// `essential[i]`: criterion `i` is essential on the cell.
    pub essential: Vec<bool>,
    mask: Vec<bool>,
}

impl PartitionCell {
    pub fn contains(&self, z: usize) -> bool {
        self.mask[z]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Cell with explicit members; essential sets are computed from `rel`.
    pub fn from_members(order: Vec<(usize, usize)>, members: Vec<usize>, rel: &GridRelation) -> Self {
        let mut mask = vec![false; rel.grid().len()];
        for &z in &members {
            mask[z] = true;
        }
        let essential = (0..rel.grid().n()).map(|i| essential_on(rel, i, &mask)).collect();
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        PartitionCell { order, members, essential, mask }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub cells: Vec<PartitionCell>,
    /// Grid points in no cell.
    pub uncovered: Vec<usize>,
    /// Grid points whose membership the data leave open.
    pub undecided: Vec<usize>,
}

impl Partition {
    pub fn covers_grid(&self) -> bool {
        self.uncovered.is_empty() && self.undecided.is_empty()
    }
}

/// One cell per distinct observed `S^z`, with members
/// `∩_{(k,j): k R_a j} SE_kj` where `k R_a j` iff not `j S_a k`.
pub fn partition_cells(table: &ConeRelationTable, rel: &GridRelation) -> Partition {
    let grid = table.grid();
    let n = table.n();
    let mut se = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                se[i * n + j] = se_membership(table, i, j);
            }
        }
    }
    let orders: BTreeSet<Vec<(usize, usize)>> = (0..grid.len()).filter_map(|z| table.strict_pairs(z)).collect();
    let mut covered = vec![Some(false); grid.len()];
    let mut cells = Vec::new();
    for order in orders {
        let mut members = Vec::new();
        for z in 0..grid.len() {
            let mut inside = Some(true);
            for k in 0..n {
                for j in 0..n {
                    if k == j || order.contains(&(j, k)) {
                        continue;
                    }
                    inside = match (inside, se[k * n + j][z]) {
                        (Some(false), _) | (_, Some(false)) => Some(false),
                        (Some(true), Some(true)) => Some(true),
                        _ => None,
                    };
                }
            }
            match inside {
                Some(true) => {
                    members.push(z);
                    covered[z] = Some(true);
                }
                None if covered[z] == Some(false) => covered[z] = None,
                _ => {}
            }
        }
        cells.push(PartitionCell::from_members(order, members, rel));
    }
    let uncovered = (0..grid.len()).filter(|&z| covered[z] == Some(false)).collect();
    let undecided = (0..grid.len()).filter(|&z| covered[z].is_none()).collect();
    Partition { cells, uncovered, undecided }
}

/// Per grid point, the indices of the cells containing it, as a bitset.
pub(crate) struct CellIndex {
    words: usize,
    bits: Vec<u64>,
}

impl CellIndex {
    pub(crate) fn new(cells: &[PartitionCell], points: usize) -> Self {
        let words = cells.len().div_ceil(64).max(1);
        let mut bits = vec![0u64; points * words];
        for (c, cell) in cells.iter().enumerate() {
            for &z in &cell.members {
                bits[z * words + c / 64] |= 1 << (c % 64);
            }
        }
        CellIndex { words, bits }
    }

    pub(crate) fn of(&self, z: usize) -> &[u64] {
        &self.bits[z * self.words..(z + 1) * self.words]
    }

    /// Lowest cell containing all of `points`.
    pub(crate) fn common(&self, points: &[usize]) -> Option<usize> {
        (0..self.words).find_map(|w| {
            let acc = points.iter().fold(!0u64, |acc, &z| acc & self.of(z)[w]);
            (acc != 0).then(|| w * 64 + acc.trailing_zeros() as usize)
        })
    }

    /// Cells containing all of `points`.
    pub(crate) fn all_common(&self, points: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for w in 0..self.words {
            let mut acc = points.iter().fold(!0u64, |acc, &z| acc & self.of(z)[w]);
            while acc != 0 {
                out.push(w * 64 + acc.trailing_zeros() as usize);
                acc &= acc - 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::relations::build_relation_table;
    use crate::capacity::{Capacity, MobiusRep};
    use crate::prefs::{PreferenceStructure, induced_order};
    use crate::product::{ProductModel, enumerate_grid};

    fn setup(m: &MobiusRep, values: Vec<Vec<f64>>) -> (PreferenceStructure, Partition) {
        let model = ProductModel::from_values(values).unwrap();
        let p = induced_order(m, &model, &enumerate_grid(&model).unwrap()).unwrap();
        let t = build_relation_table(&p).unwrap();
        let part = partition_cells(&t, &p.relation().unwrap());
        (p, part)
    }

    #[test]
    fn additive_model_has_one_cell() {
        let m = Capacity::additive(&[0.5, 0.5]).unwrap().to_mobius();
        let (_, part) = setup(&m, vec![vec![0.0, 1.0, 2.0], vec![0.0, 1.5, 2.0]]);
        assert_eq!(part.cells.len(), 1);
        assert_eq!(part.cells[0].len(), 9);
        assert!(part.cells[0].order.is_empty());
        assert!(part.covers_grid());
    }

    #[test]
    fn min_capacity_splits_along_the_diagonal() {
        let m = Capacity::minimum(2).unwrap().to_mobius();
        let f = vec![0.0, 1.0, 2.0, 3.0];
        let (_, part) = setup(&m, vec![f.clone(), f]);
        assert!(part.covers_grid(), "{part:?}");
        let strict: Vec<&PartitionCell> = part.cells.iter().filter(|c| !c.order.is_empty()).collect();
        assert_eq!(strict.len(), 2);
        // 0 S 1 side: criterion 0 above, so only criterion 1 (the smaller value) matters
        let upper = strict.iter().find(|c| c.order == vec![(0, 1)]).unwrap();
        assert_eq!(upper.essential, vec![false, true]);
        // the two sides overlap on the diagonal
        let lower = strict.iter().find(|c| c.order == vec![(1, 0)]).unwrap();
        let shared: Vec<usize> = upper.members.iter().filter(|z| lower.contains(**z)).copied().collect();
        assert!(!shared.is_empty());
    }

    #[test]
    fn single_point_grid_has_one_cell() {
        let m = Capacity::minimum(2).unwrap().to_mobius();
        let (_, part) = setup(&m, vec![vec![0.0], vec![1.0]]);
        assert_eq!(part.cells.len(), 1);
        assert_eq!(part.cells[0].members, vec![0]);
    }

    #[test]
    fn cell_index_intersections() {
        let m = Capacity::minimum(2).unwrap().to_mobius();
        let f = vec![0.0, 1.0, 2.0];
        let (_, part) = setup(&m, vec![f.clone(), f]);
        let idx = CellIndex::new(&part.cells, 9);
        for z in 0..9 {
            let all = idx.all_common(&[z]);
            for (c, cell) in part.cells.iter().enumerate() {
                assert_eq!(all.contains(&c), cell.contains(z));
            }
            assert_eq!(idx.common(&[z]), all.first().copied());
        }
    }
}
