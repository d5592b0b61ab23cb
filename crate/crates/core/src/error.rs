use alloc::string::String;

use crate::subset::Subset;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{0} criteria exceeds the supported maximum of {max}", max = crate::subset::MAX_CRITERIA)]
    TooManyCriteria(usize),
    #[error("score vector contains a non-finite entry at coordinate {0}")]
    NonFinite(usize),
    #[error("grid of {size} alternatives exceeds the cap of {cap}")]
    GridTooLarge { size: u128, cap: usize },
    #[error("criterion {criterion}: {reason}")]
    InvalidScale { criterion: usize, reason: String },
    #[error("criterion {0} carries no values")]
    MissingValues(usize),
    #[error("level {level} is out of range for criterion {criterion}")]
    LevelOutOfRange { criterion: usize, level: usize },
    #[error("alternative index {0} is out of range")]
    AlternativeOutOfRange(usize),
    #[error("preference data: {0}")]
    InvalidPreferences(String),
    #[error("clique partition: {0}")]
    InvalidPartition(String),
    #[error("subset {subset} straddles cliques but carries mass {value}")]
    StraddlingSubset { subset: Subset, value: f64 },
    #[error("scale factor {0} must be positive")]
    NonPositiveScale(f64),
    #[error("no relation-minimal coordinate in {subset} at alternative {point}")]
    RelationIncomplete { subset: Subset, point: usize },
    #[error("orderings disagree on the cross pair ({inner}, {outer})")]
    CrossPairMismatch { inner: usize, outer: usize },
    #[error("fitting refuses {0} criteria (at most 12)")]
    FitTooLarge(usize),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("linear program: {0}")]
    Solver(String),
}
