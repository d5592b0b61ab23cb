//! Choquet-integral preference models on finite heterogeneous product sets.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod axioms;
pub mod capacity;
pub mod error;
pub mod fit;
pub mod generate;
pub mod integral;
pub mod lp;
pub mod prefs;
pub mod relational;
pub mod roundtrip;
pub mod product;
pub mod subset;
pub mod uniqueness;

pub use capacity::{Capacity, CapacityViolation, DEFAULT_TOLERANCE, MobiusRep, capacity_of, mobius_of, validate_capacity};
pub use error::{Error, Result};
pub use integral::{
    SpecialCase, choquet_mobius, choquet_sorted, classify_special, cliques_from_mobius, is_comonotonic,
    sorted_permutation, weights_for_ordering,
};
pub use prefs::{
    GridRelation, MarginalFailure, MarginalOrder, PairStatement, PreferenceData, PreferenceStructure, induced_order,
    marginal_order,
};
pub use product::{Alternative, CriterionScale, Grid, ProductModel, enumerate_grid};
pub use subset::Subset;
