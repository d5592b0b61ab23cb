//! Choquet integral evaluation and related capacity algebra.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::capacity::{Capacity, MobiusRep};
use crate::error::{Error, Result};
use crate::subset::{Subset, UnionFind, all_subsets};

fn check_scores(n: usize, f: &[f64]) -> Result<()> {
    if f.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: f.len() });
    }
    match f.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// Coordinates sorted ascending by `(value, index)`.
pub fn sorted_permutation(f: &[f64]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..f.len()).collect();
    perm.sort_by(|&a, &b| f[a].partial_cmp(&f[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    perm
}

/// Sorted-increment form of the integral.
///
/// Negative scores are handled by shifting everything so the minimum is zero
/// and shifting the result back, which is exact because `ν(N) = 1`.
pub fn choquet_sorted(c: &Capacity, f: &[f64]) -> Result<f64> {
    check_scores(c.n(), f)?;
    let lowest = f.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = if lowest < 0.0 { lowest } else { 0.0 };
    let mut upper = Subset::full(c.n());
    let mut prev = 0.0;
    let mut total = 0.0;
    for i in sorted_permutation(f) {
        let v = f[i] - shift;
        total += (v - prev) * c.value(upper);
        prev = v;
        upper = upper.remove(i);
    }
    Ok(total + shift)
}

/// `Σ_A m(A) · min_{i∈A} f_i`.
pub fn choquet_mobius(m: &MobiusRep, f: &[f64]) -> Result<f64> {
    check_scores(m.n(), f)?;
    let size = 1usize << m.n();
    let mut mins = vec![f64::INFINITY; size];
    let mut total = 0.0;
    for a in 1..size {
        let low = a.trailing_zeros() as usize;
        mins[a] = mins[a & (a - 1)].min(f[low]);
        total += m.coeffs()[a] * mins[a];
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialCase {
    Min,
    Max,
    Additive,
    General,
}

impl fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecialCase::Min => "MIN",
            SpecialCase::Max => "MAX",
            SpecialCase::Additive => "ADDITIVE",
            SpecialCase::General => "GENERAL",
        })
    }
}

/// Recognizes the capacities whose integral is min, max or a weighted sum.
///
/// The tests are applied in that order, so the single-criterion capacity is
/// tagged `Min`.
pub fn classify_special(m: &MobiusRep, tol: f64) -> SpecialCase {
    let n = m.n();
    let full = Subset::full(n);
    let is_min = all_subsets(n).all(|a| {
        let want = if a == full { 1.0 } else { 0.0 };
        (m.coeff(a) - want).abs() <= tol
    });
    if is_min {
        return SpecialCase::Min;
    }
    let c = m.to_capacity();
    if all_subsets(n).skip(1).all(|a| (c.value(a) - 1.0).abs() <= tol) {
        return SpecialCase::Max;
    }
    if all_subsets(n).filter(|a| a.len() >= 2).all(|a| m.coeff(a).abs() <= tol) {
        return SpecialCase::Additive;
    }
    SpecialCase::General
}

/// True iff no pair of coordinates is strictly reversed between `f` and `g`.
pub fn is_comonotonic(f: &[f64], g: &[f64]) -> Result<bool> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch { expected: f.len(), found: g.len() });
    }
    for i in 0..f.len() {
        for j in 0..f.len() {
            if f[i] > f[j] && g[i] < g[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Weights `p` with `C(f) = Σ p_i f_i` for every `f` ordered like `rank`
/// (larger rank means larger score).
///
/// Ties are broken by coordinate index, so the weights always sum to one; for
/// strict ranks `p_i = ν({j : rank_j ≥ rank_i}) − ν({j : rank_j > rank_i})`.
pub fn weights_for_ordering(c: &Capacity, rank: &[i64]) -> Result<Vec<f64>> {
    if rank.len() != c.n() {
        return Err(Error::LengthMismatch { expected: c.n(), found: rank.len() });
    }
    let mut perm: Vec<usize> = (0..rank.len()).collect();
    perm.sort_by_key(|&i| (rank[i], i));
    let mut p = vec![0.0; rank.len()];
    let mut upper = Subset::full(c.n());
    for i in perm {
        let rest = upper.remove(i);
        p[i] = c.value(upper) - c.value(rest);
        upper = rest;
    }
    Ok(p)
}

/// Finest partition of the criteria such that no subset with nonzero mass
/// meets two blocks.
pub fn cliques_from_mobius(m: &MobiusRep, tol: f64) -> Vec<Subset> {
    let mut uf = UnionFind::new(m.n());
    for a in m.support(tol) {
        let first = a.lowest().unwrap_or(0);
        for i in a.members() {
            uf.union(first, i);
        }
    }
    uf.blocks()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::DEFAULT_TOLERANCE as TOL;

    fn cap2() -> Capacity {
        Capacity::new(2, vec![0.0, 0.3, 0.6, 1.0]).unwrap()
    }

    #[test]
    fn sorted_form_examples() {
        let min3 = Capacity::minimum(3).unwrap();
        assert!((choquet_sorted(&min3, &[0.2, 0.7, 0.5]).unwrap() - 0.2).abs() < 1e-12);
        assert!((choquet_sorted(&cap2(), &[0.9, 0.4]).unwrap() - 0.55).abs() < 1e-12);
        assert!((choquet_sorted(&cap2(), &[0.8, 0.8]).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn negative_scores_are_translated() {
        let c = cap2();
        let shifted = choquet_sorted(&c, &[1.9, 1.4]).unwrap();
        let base = choquet_sorted(&c, &[-0.1, -0.6]).unwrap();
        assert!((shifted - 2.0 - base).abs() < 1e-12);
    }

    #[test]
    fn mobius_form_examples() {
        let m = MobiusRep::new(2, vec![0.0, 0.3, 0.6, 0.1]).unwrap();
        assert!((choquet_mobius(&m, &[0.9, 0.4]).unwrap() - 0.55).abs() < 1e-12);
        let min3 = Capacity::minimum(3).unwrap().to_mobius();
        assert!((choquet_mobius(&min3, &[0.2, 0.7, 0.5]).unwrap() - 0.2).abs() < 1e-12);
        let add = Capacity::additive(&[0.2, 0.3, 0.5]).unwrap().to_mobius();
        let f = [0.4, 1.5, -0.3];
        let want = 0.2 * 0.4 + 0.3 * 1.5 + 0.5 * -0.3;
        assert!((choquet_mobius(&add, &f).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn length_and_finiteness_errors() {
        assert_eq!(
            choquet_sorted(&cap2(), &[1.0]),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        );
        assert_eq!(choquet_mobius(&cap2().to_mobius(), &[1.0, f64::NAN]), Err(Error::NonFinite(1)));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_special(&Capacity::minimum(3).unwrap().to_mobius(), TOL), SpecialCase::Min);
        let add = Capacity::additive(&[0.2, 0.3, 0.5]).unwrap().to_mobius();
        assert_eq!(classify_special(&add, TOL), SpecialCase::Additive);
        let max2 = MobiusRep::new(2, vec![0.0, 1.0, 1.0, -1.0]).unwrap();
        assert_eq!(classify_special(&max2, TOL), SpecialCase::Max);
        assert_eq!(classify_special(&cap2().to_mobius(), TOL), SpecialCase::General);
        // brute-force check that the MAX pattern integrates to max
        for a in 0..10 {
            for b in 0..10 {
                let f = [a as f64 / 9.0, b as f64 / 9.0];
                assert!((choquet_mobius(&max2, &f).unwrap() - f[0].max(f[1])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn comonotonic_examples() {
        assert!(is_comonotonic(&[1.0, 2.0], &[3.0, 3.0]).unwrap());
        assert!(!is_comonotonic(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(is_comonotonic(&[1.0, 1.0, 5.0], &[0.0, 2.0, 9.0]).unwrap());
        assert!(is_comonotonic(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ordering_weights_examples() {
        let add = Capacity::additive(&[0.2, 0.3, 0.5]).unwrap();
        let p = weights_for_ordering(&add, &[2, 0, 1]).unwrap();
        assert!(p.iter().zip([0.2, 0.3, 0.5]).all(|(a, b)| (a - b).abs() < 1e-12));

        let min3 = Capacity::minimum(3).unwrap();
        let p = weights_for_ordering(&min3, &[1, 0, 2]).unwrap();
        assert_eq!(p, vec![0.0, 1.0, 0.0]);

        // criterion 0 ranked above criterion 1: p_0 = ν({0}), p_1 = ν(N) − ν({0})
        let p = weights_for_ordering(&cap2(), &[1, 0]).unwrap();
        assert!((p[0] - 0.3).abs() < 1e-12 && (p[1] - 0.7).abs() < 1e-12);
        let f = [0.9, 0.4];
        let dot = p[0] * f[0] + p[1] * f[1];
        assert!((dot - choquet_sorted(&cap2(), &f).unwrap()).abs() < 1e-12);
        // the reverse ranking gives (0.4, 0.6)
        let p = weights_for_ordering(&cap2(), &[0, 1]).unwrap();
        assert!((p[0] - 0.4).abs() < 1e-12 && (p[1] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn ordering_weights_with_ties_sum_to_one() {
        let p = weights_for_ordering(&cap2(), &[3, 3]).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let f = [0.6, 0.6];
        let dot: f64 = p.iter().zip(f).map(|(w, v)| w * v).sum();
        assert!((dot - choquet_sorted(&cap2(), &f).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn clique_examples() {
        let add = Capacity::additive(&[0.2, 0.3, 0.5]).unwrap().to_mobius();
        assert_eq!(cliques_from_mobius(&add, TOL), vec![Subset(1), Subset(2), Subset(4)]);
        let min3 = Capacity::minimum(3).unwrap().to_mobius();
        assert_eq!(cliques_from_mobius(&min3, TOL), vec![Subset(7)]);
        let m = MobiusRep::new(3, vec![0.0, 0.2, 0.2, 0.2, 0.4, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(cliques_from_mobius(&m, TOL), vec![Subset(3), Subset(4)]);
    }
}
