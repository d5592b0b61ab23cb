//! The integral rebuilt from the coordinate relations, and the equal-sum
//! property of ordering weights.

use alloc::vec::Vec;

use crate::axioms::ConeRelationTable;
use crate::capacity::{Capacity, MobiusRep};
use crate::error::{Error, Result};
use crate::integral::weights_for_ordering;
use crate::product::{Alternative, ProductModel};
use crate::subset::all_subsets;

/// `Σ_A m(A) f_i(x_i)` where `i ∈ A` is lowest in the relation at `x`:
/// `j R^x i` for every other `j ∈ A`.
///
/// When several coordinates qualify the lowest index is used; the values
/// play no part in the choice.
pub fn choquet_via_relations(m: &MobiusRep, model: &ProductModel, x: &Alternative, table: &ConeRelationTable) -> Result<f64> {
    model.check_alternative(x)?;
    let f = model.scores(x)?;
    let z = table.grid().try_index(x).ok_or(Error::LengthMismatch { expected: table.n(), found: x.len() })?;
    let mut total = 0.0;
    for a in all_subsets(m.n()).skip(1) {
        let coeff = m.coeff(a);
        if coeff == 0.0 {
            continue;
        }
        let lowest = a.members().find(|&i| a.members().all(|j| j == i || table.r(z, j, i) == Some(true)));
        let i = lowest.ok_or(Error::RelationIncomplete { subset: a, point: z })?;
        total += coeff * f[i];
    }
    Ok(total)
}

/// Whether the ordering weights of `a` and `b` give the same total on
/// `inside`, for orderings that agree on every pair across its boundary.
pub fn check_a_na(c: &Capacity, a: &[i64], b: &[i64], inside: crate::subset::Subset, tol: f64) -> Result<bool> {
    let n = c.n();
    for r in [a, b] {
        if r.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: r.len() });
        }
    }
    for i in inside.members() {
        for j in (0..n).filter(|&j| !inside.contains(j)) {
            if a[i].cmp(&a[j]) != b[i].cmp(&b[j]) {
                return Err(Error::CrossPairMismatch { inner: i, outer: j });
            }
        }
    }
    let total = |r: &[i64]| -> Result<f64> {
        let p: Vec<f64> = weights_for_ordering(c, r)?;
        Ok(inside.members().map(|i| p[i]).sum())
    };
    Ok((total(a)? - total(b)?).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::build_relation_table;
    use crate::capacity::DEFAULT_TOLERANCE;
    use crate::integral::choquet_mobius;
    use crate::prefs::{MarginalOrder, induced_order};
    use crate::product::enumerate_grid;
    use crate::subset::Subset;

    fn setup(m: &MobiusRep, values: Vec<Vec<f64>>) -> (ProductModel, Vec<Alternative>, ConeRelationTable) {
        let model = ProductModel::from_values(values).unwrap();
        let alts = enumerate_grid(&model).unwrap();
        let table = build_relation_table(&induced_order(m, &model, &alts).unwrap()).unwrap();
        (model, alts, table)
    }

    /// Agreement on every point accepted by `keep`.
    fn agree_on(m: &MobiusRep, values: Vec<Vec<f64>>, keep: impl Fn(&Alternative) -> bool) {
        let (model, alts, table) = setup(m, values);
        for x in alts.iter().filter(|x| keep(x)) {
            let via = choquet_via_relations(m, &model, x, &table).unwrap();
            let direct = choquet_mobius(m, &model.scores(x).unwrap()).unwrap();
            assert!((via - direct).abs() < 1e-9, "{x:?}: {via} vs {direct}");
        }
    }

    #[test]
    fn min_capacity_matches_the_mobius_form() {
        let f = alloc::vec![0.0, 1.0, 2.0, 3.0];
        agree_on(&Capacity::minimum(2).unwrap().to_mobius(), alloc::vec![f.clone(), f], |_| true);
    }

    #[test]
    fn top_corner_tie_falls_to_the_lowest_index() {
        // both coordinates at their top level: the cone is a single point,
        // so the relations hold both ways and criterion 0 is taken
        let m = Capacity::minimum(2).unwrap().to_mobius();
        let (model, _, table) = setup(&m, alloc::vec![alloc::vec![0.0, 0.4, 1.0], alloc::vec![0.1, 0.5, 0.8]]);
        let via = choquet_via_relations(&m, &model, &alloc::vec![2, 2], &table).unwrap();
        assert_eq!(via, 1.0);
        assert_eq!(choquet_mobius(&m, &[1.0, 0.8]).unwrap(), 0.8);
    }

    #[test]
    fn additive_ignores_the_table() {
        let m = Capacity::additive(&[0.3, 0.7]).unwrap().to_mobius();
        agree_on(&m, alloc::vec![alloc::vec![0.0, 1.0, 5.0], alloc::vec![2.0, 3.0]], |_| true);
    }

    #[test]
    fn three_criteria_with_a_value_consistent_table() {
        // flags set straight from the values, so the lowest member is always found
        let m = MobiusRep::new(3, alloc::vec![0.0, 0.2, 0.1, 0.1, 0.2, 0.1, 0.1, 0.2]).unwrap();
        let values = alloc::vec![alloc::vec![0.0, 1.5, 2.0], alloc::vec![0.5, 1.0, 3.0], alloc::vec![0.2, 1.2, 2.5]];
        let model = ProductModel::from_values(values).unwrap();
        let grid = model.grid().unwrap();
        let mut flags = Vec::new();
        for z in 0..grid.len() {
            let f = model.scores(&grid.coords(z)).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    flags.push(Some(f[i] >= f[j]));
                }
            }
        }
        let table = ConeRelationTable::from_flags(grid.clone(), MarginalOrder::declared(grid.dims()), flags);
        for z in 0..grid.len() {
            let x = grid.coords(z);
            let via = choquet_via_relations(&m, &model, &x, &table).unwrap();
            let direct = choquet_mobius(&m, &model.scores(&x).unwrap()).unwrap();
            assert!((via - direct).abs() < 1e-9, "{x:?}: {via} vs {direct}");
        }
    }

    #[test]
    fn missing_flags_are_reported() {
        let m = Capacity::minimum(2).unwrap().to_mobius();
        let model = ProductModel::from_values(alloc::vec![alloc::vec![0.0, 1.0], alloc::vec![0.0, 1.0]]).unwrap();
        let grid = model.grid().unwrap();
        let table = ConeRelationTable::from_flags(grid.clone(), MarginalOrder::declared(grid.dims()), alloc::vec![None; 16]);
        assert!(matches!(
            choquet_via_relations(&m, &model, &alloc::vec![1, 0], &table),
            Err(Error::RelationIncomplete { .. })
        ));
    }

    #[test]
    fn equal_sums_for_orderings_agreeing_across_the_boundary() {
        let c = Capacity::minimum(3).unwrap();
        let inside = Subset::from_members(&[0, 1]);
        // 0 and 1 swap, both stay above 2
        assert!(check_a_na(&c, &[2, 1, 0], &[1, 2, 0], inside, DEFAULT_TOLERANCE).unwrap());
        let add = Capacity::additive(&[0.2, 0.3, 0.5]).unwrap();
        assert!(check_a_na(&add, &[0, 1, 2], &[1, 0, 2], inside, DEFAULT_TOLERANCE).unwrap());
        assert!(check_a_na(&c, &[0, 1, 2], &[2, 0, 1], Subset::full(3), DEFAULT_TOLERANCE).unwrap());
    }

    #[test]
    fn cross_pair_disagreement_is_an_error() {
        let c = Capacity::minimum(3).unwrap();
        let inside = Subset::from_members(&[0, 1]);
        assert!(matches!(
            check_a_na(&c, &[2, 1, 0], &[2, 0, 1], inside, DEFAULT_TOLERANCE),
            Err(Error::CrossPairMismatch { inner: 1, outer: 2 })
        ));
        // a tie on one side only is a disagreement too
        assert!(check_a_na(&c, &[1, 1, 1], &[2, 2, 1], inside, DEFAULT_TOLERANCE).is_err());
    }
}
