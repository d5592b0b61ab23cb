//! Per-clique affine changes of the value functions and the matching
//! change of the capacity, which together leave the induced order intact.

use alloc::format;
use alloc::vec::Vec;

use crate::capacity::{DEFAULT_TOLERANCE, MobiusRep};
use crate::error::{Error, Result};
use crate::product::ProductModel;
use crate::subset::{Subset, all_subsets};

/// Clique `k` gets scale `scale[k] > 0` and shift `shift[k]`; the new value
/// functions `g` satisfy `f = scale · g + shift` on that clique.
#[derive(Clone, Debug, PartialEq)]
pub struct CliqueTransform {
    pub cliques: Vec<Subset>,
    pub scale: Vec<f64>,
    pub shift: Vec<f64>,
}

impl CliqueTransform {
    pub fn identity(cliques: Vec<Subset>) -> Self {
        let k = cliques.len();
        CliqueTransform { cliques, scale: alloc::vec![1.0; k], shift: alloc::vec![0.0; k] }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.scale.len() != self.cliques.len() || self.shift.len() != self.cliques.len() {
            return Err(Error::LengthMismatch { expected: self.cliques.len(), found: self.scale.len().min(self.shift.len()) });
        }
        if let Some(&a) = self.scale.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::NonPositiveScale(a));
        }
        let mut seen = Subset(0);
        for &c in &self.cliques {
            if c.is_empty() || !seen.intersection(c).is_empty() {
                return Err(Error::InvalidPartition(format!("clique {c} is empty or overlaps another")));
            }
            seen = seen.union(c);
        }
        if seen != Subset::full(n) {
            return Err(Error::InvalidPartition(format!("cliques cover {seen}, not all {n} criteria")));
        }
        Ok(())
    }

    fn clique_of(&self, b: Subset) -> Option<usize> {
        self.cliques.iter().position(|&c| b.is_subset_of(c))
    }
}

/// `m'(B) = α_k m(B) / Σ_l α_l Σ_{C⊆A_l} m(C)` for `B` inside clique `A_k`,
/// and `g_i = (f_i − β_k) / α_k` for `i` in `A_k`.
///
/// Every subset carrying mass must lie inside one clique, so the transform's
/// cliques have to be unions of the Möbius cliques.
pub fn apply_uniqueness_transform(m: &MobiusRep, model: &ProductModel, t: &CliqueTransform) -> Result<(MobiusRep, ProductModel)> {
    let n = m.n();
    if model.n() != n {
        return Err(Error::LengthMismatch { expected: n, found: model.n() });
    }
    t.validate(n)?;
    let mut owner = alloc::vec![usize::MAX; 1 << n];
    let mut mass = alloc::vec![0.0; t.cliques.len()];
    for b in all_subsets(n).skip(1) {
        let v = m.coeff(b);
        match t.clique_of(b) {
            Some(k) => {
                owner[b.bits()] = k;
                mass[k] += v;
            }
            None if v.abs() > DEFAULT_TOLERANCE => return Err(Error::StraddlingSubset { subset: b, value: v }),
            None => {}
        }
    }
    let denom: f64 = t.scale.iter().zip(&mass).map(|(a, w)| a * w).sum();
    if !(denom > 0.0) {
        return Err(Error::InvalidPartition(format!("weighted clique mass {denom} is not positive")));
    }
    let coeffs: Vec<f64> = (0..1usize << n)
        .map(|b| match owner[b] {
            usize::MAX => 0.0,
            k => t.scale[k] * m.coeffs()[b] / denom,
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let k = t.clique_of(Subset::singleton(i)).expect("validated partition covers every criterion");
        let f = model.scales()[i].values.as_ref().ok_or(Error::MissingValues(i))?;
        values.push(f.iter().map(|v| (v - t.shift[k]) / t.scale[k]).collect());
    }
    Ok((MobiusRep::new(n, coeffs)?, model.with_values(values)?))
}
