//! Seeded random capacities and value scales for tests and suites.
//!
//! Capacities sit on the lattice `k / 20` and scale values are small
//! integers, so coincident values (and hence indifferences) are common and
//! exact up to rounding.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::{Capacity, MobiusRep};
use crate::error::Result;
use crate::product::ProductModel;
use crate::subset::{Subset, all_subsets};

pub const LATTICE: u32 = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monotone capacity with `ν(A)` drawn uniformly from the lattice points in
/// `[max_{i∈A} ν(A∖i), 1]`, sets visited by increasing size.
pub fn random_capacity(n: usize, rng: &mut impl Rng) -> Result<Capacity> {
    let size = 1usize << n;
    let mut by_size: Vec<Subset> = all_subsets(n).skip(1).collect();
    by_size.sort_by_key(|a| (a.len(), a.bits()));
    let mut k = alloc::vec![0u32; size];
    for a in by_size {
        let floor = a.members().map(|i| k[a.remove(i).bits()]).max().unwrap_or(0);
        k[a.bits()] = if a == Subset::full(n) { LATTICE } else { rng.random_range(floor..=LATTICE) };
    }
    Capacity::new(n, k.iter().map(|&v| f64::from(v) / f64::from(LATTICE)).collect())
}

/// `levels` strictly increasing integers starting in `0..=2` with steps in `1..=3`.
pub fn random_scale(levels: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut v = f64::from(rng.random_range(0..=2u32));
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        out.push(v);
        v += f64::from(rng.random_range(1..=3u32));
    }
    out
}

/// A model with `n` criteria, each with a level count drawn from `levels`.
pub fn random_model(n: usize, levels: core::ops::RangeInclusive<usize>, rng: &mut impl Rng) -> Result<ProductModel> {
    let values = (0..n)
        .map(|_| {
            let l = rng.random_range(levels.clone());
            random_scale(l, rng)
        })
        .collect();
    ProductModel::from_values(values)
}

/// One random case: capacity first, then the model, from a single seed.
pub fn random_case(seed: u64, n: usize, levels: core::ops::RangeInclusive<usize>) -> Result<(MobiusRep, ProductModel)> {
    let mut r = rng(seed);
    let c = random_capacity(n, &mut r)?;
    let model = random_model(n, levels, &mut r)?;
    Ok((c.to_mobius(), model))
}

/// Möbius mass supported inside the given blocks only: a random capacity on
/// each block, mixed with random positive weights.
pub fn block_mobius(n: usize, blocks: &[Subset], rng: &mut impl Rng) -> Result<MobiusRep> {
    let mut coeffs = alloc::vec![0.0; 1 << n];
    let weights: Vec<f64> = blocks.iter().map(|_| f64::from(rng.random_range(1..=LATTICE))).collect();
    let total: f64 = weights.iter().sum();
    for (&block, w) in blocks.iter().zip(&weights) {
        let members: Vec<usize> = block.members().collect();
        let local = random_capacity(members.len(), rng)?.to_mobius();
        for b in all_subsets(members.len()).skip(1) {
            let global = Subset::from_members(&b.members().map(|i| members[i]).collect::<Vec<_>>());
            coeffs[global.bits()] += w / total * local.coeff(b);
        }
    }
    MobiusRep::new(n, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::DEFAULT_TOLERANCE;
    use crate::integral::cliques_from_mobius;

    #[test]
    fn capacities_are_valid_and_reproducible() {
        for seed in 0..50 {
            let a = random_capacity(4, &mut rng(seed)).unwrap();
            assert!(a.is_valid(DEFAULT_TOLERANCE), "{a:?}");
            assert_eq!(a, random_capacity(4, &mut rng(seed)).unwrap());
        }
    }

    #[test]
    fn scales_strictly_increase() {
        let mut r = rng(7);
        for _ in 0..20 {
            let s = random_scale(5, &mut r);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn block_mass_stays_inside_blocks() {
        let blocks = [Subset::from_members(&[0, 2]), Subset::singleton(1), Subset::from_members(&[3])];
        for seed in 0..20 {
            let m = block_mobius(4, &blocks, &mut rng(seed)).unwrap();
            assert!(m.is_valid(1e-12));
            for b in m.support(1e-12) {
                assert!(blocks.iter().any(|&k| b.is_subset_of(k)));
            }
            let found = cliques_from_mobius(&m, 1e-12);
            assert!(found.iter().all(|c| blocks.iter().any(|&k| c.is_subset_of(k))));
        }
    }
}
