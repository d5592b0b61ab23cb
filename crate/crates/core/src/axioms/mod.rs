//! Finite-data checks of the representation axioms and the relations they induce.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::product::Alternative;

pub mod battery;
pub mod bi_independence;
pub mod cells;
pub mod cone;
pub mod essentiality;
pub mod relations;
pub mod separability;
pub mod sequences;
pub mod solvability;
pub mod tradeoff;
pub mod weak_order;

pub use battery::{Analysis, NECESSARY, run_checks};
pub use bi_independence::check_a6;
pub use cells::{Partition, PartitionCell, partition_cells, se_membership};
pub use cone::{ConeSpec, Side, check_3c_on_cone};
pub use essentiality::{check_essentiality, essential_on};
pub use relations::{
    ConeRelationTable, TableError, build_relation_table, build_relation_table_from, check_a3, check_acyclicity,
    interaction_cliques_from_prefs,
};
pub use separability::{check_pointwise_monotonicity, check_weak_separability};
pub use sequences::check_a5;
pub use solvability::{check_archimedean, check_restricted_solvability};
pub use tradeoff::check_a4;
pub use weak_order::check_weak_order;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    A1,
    A2,
    A3,
    A3Acycl,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    /// Triple cancellation on a single cone.
    Cone3C,
    /// Pointwise monotonicity with respect to the marginal orders.
    Monotonicity,
}

impl AxiomId {
    pub const ALL: [AxiomId; 10] = [
        AxiomId::A1,
        AxiomId::A2,
        AxiomId::A3,
        AxiomId::A3Acycl,
        AxiomId::A4,
        AxiomId::A5,
        AxiomId::A6,
        AxiomId::A7,
        AxiomId::A8,
        AxiomId::A9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::A1 => "A1",
            AxiomId::A2 => "A2",
            AxiomId::A3 => "A3",
            AxiomId::A3Acycl => "A3-ACYCL",
            AxiomId::A4 => "A4",
            AxiomId::A5 => "A5",
            AxiomId::A6 => "A6",
            AxiomId::A7 => "A7",
            AxiomId::A8 => "A8",
            AxiomId::A9 => "A9",
            AxiomId::Cone3C => "3C",
            AxiomId::Monotonicity => "MONO",
        }
    }

    pub fn parse(s: &str) -> Option<AxiomId> {
        let up = s.trim().to_ascii_uppercase();
        [AxiomId::Cone3C, AxiomId::Monotonicity]
            .into_iter()
            .chain(AxiomId::ALL)
            .find(|a| a.name() == up || (up == "ACYCL" && *a == AxiomId::A3Acycl))
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Undetermined,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Undetermined => "UNDETERMINED",
            Status::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

/// A concrete instance violating an axiom.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub summary: String,
    /// Named alternatives taking part in the violation.
    pub points: Vec<(String, Alternative)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub checked: u64,
    pub violated: u64,
    /// Fraction of the quantified instances actually examined.
    pub coverage: f64,
    pub note: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub(crate) fn not_applicable(axiom: AxiomId, note: impl Into<String>) -> Self {
        AxiomReport {
            axiom,
            status: Status::NotApplicable,
            witnesses: Vec::new(),
            checked: 0,
            violated: 0,
            coverage: 0.0,
            note: Some(note.into()),
        }
    }

    pub(crate) fn undetermined(axiom: AxiomId, note: impl Into<String>) -> Self {
        AxiomReport {
            axiom,
            status: Status::Undetermined,
            witnesses: Vec::new(),
            checked: 0,
            violated: 0,
            coverage: 0.0,
            note: Some(note.into()),
        }
    }
}

/// Work limits shared by the checkers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    /// Maximum number of elementary lookups before switching to sampling.
    pub budget: u64,
    pub seed: u64,
    pub max_witnesses: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { budget: 10_000_000, seed: 0, max_witnesses: 10 }
    }
}

/// Accumulates counts and witnesses, then settles the status.
pub(crate) struct Tally {
    axiom: AxiomId,
    max_witnesses: usize,
    witnesses: Vec<Witness>,
    checked: u64,
    violated: u64,
    unknown: bool,
    coverage: f64,
    note: Option<String>,
}

impl Tally {
    pub(crate) fn new(axiom: AxiomId, opts: &CheckOptions) -> Self {
        Tally {
            axiom,
            max_witnesses: opts.max_witnesses,
            witnesses: Vec::new(),
            checked: 0,
            violated: 0,
            unknown: false,
            coverage: 1.0,
            note: None,
        }
    }

    pub(crate) fn check(&mut self, count: u64) {
        self.checked += count;
    }

    pub(crate) fn violation(&mut self, w: impl FnOnce() -> Witness) {
        self.violated += 1;
        if self.witnesses.len() < self.max_witnesses.max(1) {
            self.witnesses.push(w());
        }
    }

    pub(crate) fn unknown(&mut self) {
        self.unknown = true;
    }

    pub(crate) fn sampled(&mut self, coverage: f64) {
        self.coverage = coverage;
        self.unknown = true;
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.note = Some(note.into());
    }

    pub(crate) fn finish(self) -> AxiomReport {
        let status = if self.violated > 0 {
            Status::Fail
        } else if self.unknown {
            Status::Undetermined
        } else {
            Status::Pass
        };
        AxiomReport {
            axiom: self.axiom,
            status,
            witnesses: self.witnesses,
            checked: self.checked,
            violated: self.violated,
            coverage: self.coverage,
            note: self.note,
        }
    }
}

/// Dense row-major bit matrix.
#[derive(Clone, Debug)]
pub(crate) struct BitMatrix {
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix { words, data: vec![0; rows * words] }
    }

    pub(crate) fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    pub(crate) fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub(crate) fn rows(&self) -> usize {
        self.data.len() / self.words
    }

    /// Elementwise AND with a row mask and a column mask.
    pub(crate) fn masked(&self, row_ok: &[bool], col_ok: &BitMatrix) -> BitMatrix {
        let mut out = self.clone();
        for r in 0..self.rows() {
            let dst = &mut out.data[r * self.words..(r + 1) * self.words];
            if !row_ok[r] {
                dst.iter_mut().for_each(|w| *w = 0);
            } else {
                dst.iter_mut().zip(col_ok.row(r)).for_each(|(w, m)| *w &= m);
            }
        }
        out
    }
}

fn first_common(a: &[u64], b: &[u64]) -> Option<usize> {
    a.iter()
        .zip(b)
        .enumerate()
        .find_map(|(k, (x, y))| (x & y != 0).then(|| k * 64 + (x & y).trailing_zeros() as usize))
}

/// Searches `(r1, r2, c1, c2)` with `p[r1,c1] ∧ p2[r2,c1] ∧ q[r1,c2] ∧ q2[r2,c2]`.
///
/// `p`, `q` share rows; `p`, `p2` share columns; `q`, `q2` share columns.
/// Returns the number of row pairs examined alongside any hit.
pub(crate) fn find_cancellation(
    p: &BitMatrix,
    p2: &BitMatrix,
    q: &BitMatrix,
    q2: &BitMatrix,
) -> (u64, Option<(usize, usize, usize, usize)>) {
    let mut examined = 0u64;
    let live2: Vec<usize> = (0..p2.rows())
        .filter(|&r| p2.row(r).iter().any(|w| *w != 0) && q2.row(r).iter().any(|w| *w != 0))
        .collect();
    for r1 in 0..p.rows() {
        if p.row(r1).iter().all(|w| *w == 0) || q.row(r1).iter().all(|w| *w == 0) {
            continue;
        }
        for &r2 in &live2 {
            examined += 1;
            if let Some(c1) = first_common(p.row(r1), p2.row(r2))
                && let Some(c2) = first_common(q.row(r1), q2.row(r2))
            {
                return (examined, Some((r1, r2, c1, c2)));
            }
        }
    }
    (examined, None)
}
