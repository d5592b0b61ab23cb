//! Capacities (monotone normalized set functions) and their Möbius coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::subset::{MAX_CRITERIA, Subset, all_subsets, inv_subset_sums, subset_sums};

/// Default tolerance for equality and monotonicity checks on reals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

fn check_shape(n: usize, len: usize) -> Result<()> {
    if n > MAX_CRITERIA {
        return Err(Error::TooManyCriteria(n));
    }
    if len != 1 << n {
        return Err(Error::LengthMismatch { expected: 1 << n, found: len });
    }
    Ok(())
}

/// Set function on the subsets of `{0, .., n-1}`, indexed by [`Subset`] bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Capacity {
    n: usize,
    values: Vec<f64>,
}

/// Möbius coefficients `m(A)`, indexed by [`Subset`] bits.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusRep {
    n: usize,
    coeffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CapacityViolation {
    EmptySetNonZero { value: f64 },
    NotNormalized { value: f64 },
    NotMonotone { subset: Subset, superset: Subset, lower: f64, upper: f64 },
}

impl fmt::Display for CapacityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapacityViolation::EmptySetNonZero { value } => {
                write!(f, "ν(∅)=0 violated: ν(∅)={value}")
            }
            CapacityViolation::NotNormalized { value } => {
                write!(f, "ν(N)=1 violated: ν(N)={value}")
            }
            CapacityViolation::NotMonotone { subset, superset, lower, upper } => write!(
                f,
                "monotonicity violated: ν({subset})={lower} > ν({superset})={upper}"
            ),
        }
    }
}

impl Capacity {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_shape(n, values.len())?;
        Ok(Capacity { n, values })
    }

    /// `ν(A) = Σ_{i∈A} w_i`.
    pub fn additive(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        check_shape(n, 1 << n)?;
        let values = all_subsets(n)
            .map(|a| a.members().map(|i| weights[i]).sum())
            .collect();
        Ok(Capacity { n, values })
    }

    /// The capacity whose integral is the minimum.
    pub fn minimum(n: usize) -> Result<Self> {
        check_shape(n, 1 << n)?;
        let mut values = vec![0.0; 1 << n];
        values[(1 << n) - 1] = 1.0;
        Ok(Capacity { n, values })
    }

    /// The capacity whose integral is the maximum.
    pub fn maximum(n: usize) -> Result<Self> {
        check_shape(n, 1 << n)?;
        let mut values = vec![1.0; 1 << n];
        values[0] = 0.0;
        Ok(Capacity { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, a: Subset) -> f64 {
        self.values[a.bits()]
    }

    /// Lists every violated capacity constraint; empty means valid.
    ///
    /// Monotonicity is checked on single-element extensions, which implies it
    /// for all chains.
    pub fn validate(&self, tol: f64) -> Vec<CapacityViolation> {
        let mut out = Vec::new();
        let empty = self.values[0];
        if empty.abs() > tol || !empty.is_finite() {
            out.push(CapacityViolation::EmptySetNonZero { value: empty });
        }
        let top = self.values[(1 << self.n) - 1];
        if (top - 1.0).abs() > tol || !top.is_finite() {
            out.push(CapacityViolation::NotNormalized { value: top });
        }
        for a in all_subsets(self.n) {
            for i in 0..self.n {
                if a.contains(i) {
                    continue;
                }
                let b = a.insert(i);
                let (lower, upper) = (self.value(a), self.value(b));
                if lower > upper + tol || lower.is_nan() || upper.is_nan() {
                    out.push(CapacityViolation::NotMonotone { subset: a, superset: b, lower, upper });
                }
            }
        }
        out
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.validate(tol).is_empty()
    }

    pub fn to_mobius(&self) -> MobiusRep {
        let mut coeffs = self.values.clone();
        inv_subset_sums(&mut coeffs);
        MobiusRep { n: self.n, coeffs }
    }
}

impl MobiusRep {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_shape(n, coeffs.len())?;
        Ok(MobiusRep { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, a: Subset) -> f64 {
        self.coeffs[a.bits()]
    }

    pub fn to_capacity(&self) -> Capacity {
        let mut values = self.coeffs.clone();
        subset_sums(&mut values);
        Capacity { n: self.n, values }
    }

    /// Violations of the induced capacity (which include `Σ m = 1` and `m(∅) = 0`).
    pub fn validate(&self, tol: f64) -> Vec<CapacityViolation> {
        self.to_capacity().validate(tol)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.validate(tol).is_empty()
    }

    /// Subsets carrying a coefficient larger than `tol` in magnitude.
    pub fn support(&self, tol: f64) -> impl Iterator<Item = Subset> + '_ {
        all_subsets(self.n).filter(move |a| !a.is_empty() && self.coeff(*a).abs() > tol)
    }
}

pub fn validate_capacity(c: &Capacity, tol: f64) -> Vec<CapacityViolation> {
    c.validate(tol)
}

pub fn mobius_of(c: &Capacity) -> MobiusRep {
    c.to_mobius()
}

/// Zeta transform of `m`, together with any constraint the result violates.
pub fn capacity_of(m: &MobiusRep, tol: f64) -> (Capacity, Vec<CapacityViolation>) {
    let c = m.to_capacity();
    let violations = c.validate(tol);
    (c, violations)
}
