//! Preference data over alternatives and the orders derived from it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::capacity::{DEFAULT_TOLERANCE, MobiusRep};
use crate::error::{Error, Result};
use crate::integral::choquet_mobius;
use crate::product::{Alternative, Grid, ProductModel};

/// `better ≻ worse` when `strict`, otherwise `better ∼ worse`; indices point
/// into the alternative list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairStatement {
    pub better: usize,
    pub worse: usize,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PreferenceData {
    /// One rank per alternative; larger is better, equal ranks are indifferent.
    Ranked(Vec<i64>),
    Pairs(Vec<PairStatement>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreferenceStructure {
    model: ProductModel,
    alternatives: Vec<Alternative>,
    data: PreferenceData,
}

impl PreferenceStructure {
    pub fn new(model: ProductModel, alternatives: Vec<Alternative>, data: PreferenceData) -> Result<Self> {
        for x in &alternatives {
            model.check_alternative(x)?;
        }
        match &data {
            PreferenceData::Ranked(ranks) => {
                if ranks.len() != alternatives.len() {
                    return Err(Error::LengthMismatch { expected: alternatives.len(), found: ranks.len() });
                }
                let mut seen = BTreeMap::new();
                for (x, &r) in alternatives.iter().zip(ranks) {
                    if let Some(prev) = seen.insert(x, r)
                        && prev != r
                    {
                        return Err(Error::InvalidPreferences(format!("alternative {x:?} listed with ranks {prev} and {r}")));
                    }
                }
            }
            PreferenceData::Pairs(pairs) => {
                for p in pairs {
                    for idx in [p.better, p.worse] {
                        if idx >= alternatives.len() {
                            return Err(Error::AlternativeOutOfRange(idx));
                        }
                    }
                }
            }
        }
        Ok(PreferenceStructure { model, alternatives, data })
    }

    /// Ranked data over the full grid, ranks given in grid order.
    pub fn ranked_grid(model: ProductModel, ranks: Vec<i64>) -> Result<Self> {
        let grid = model.grid()?;
        let alts = (0..grid.len()).map(|k| grid.coords(k)).collect();
        PreferenceStructure::new(model, alts, PreferenceData::Ranked(ranks))
    }

    pub fn model(&self) -> &ProductModel {
        &self.model
    }

    pub fn alternatives(&self) -> &[Alternative] {
        &self.alternatives
    }

    pub fn data(&self) -> &PreferenceData {
        &self.data
    }

    pub fn ranks(&self) -> Option<&[i64]> {
        match &self.data {
            PreferenceData::Ranked(r) => Some(r),
            PreferenceData::Pairs(_) => None,
        }
    }

    /// Comparison oracle on grid indices.
    pub fn relation(&self) -> Result<GridRelation> {
        let grid = self.model.grid()?;
        let idx: Vec<usize> = self.alternatives.iter().map(|x| grid.index(x)).collect();
        let kind = match &self.data {
            PreferenceData::Ranked(ranks) => {
                let mut rank = vec![None; grid.len()];
                for (&k, &r) in idx.iter().zip(ranks) {
                    rank[k] = Some(r);
                }
                Relation::Ranked(rank)
            }
            PreferenceData::Pairs(pairs) => {
                let mut map: BTreeMap<(usize, usize), Stated> = BTreeMap::new();
                let mut covered = vec![false; grid.len()];
                for p in pairs {
                    let (b, w) = (idx[p.better], idx[p.worse]);
                    covered[b] = true;
                    covered[w] = true;
                    let ord = if p.strict { Ordering::Greater } else { Ordering::Equal };
                    let (key, ord) = if b <= w { ((b, w), ord) } else { ((w, b), ord.reverse()) };
                    if b == w && p.strict {
                        map.insert(key, Stated::Conflict);
                        continue;
                    }
                    map.entry(key)
                        .and_modify(|s| {
                            if *s != Stated::Known(ord) {
                                *s = Stated::Conflict
                            }
                        })
                        .or_insert(Stated::Known(ord));
                }
                Relation::Pairs { map, covered }
            }
        };
        Ok(GridRelation { grid, kind })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Stated {
    Known(Ordering),
    Conflict,
}

#[derive(Clone, Debug)]
enum Relation {
    Ranked(Vec<Option<i64>>),
    Pairs { map: BTreeMap<(usize, usize), Stated>, covered: Vec<bool> },
}

/// Preference comparisons addressed by grid index.
#[derive(Clone, Debug)]
pub struct GridRelation {
    grid: Grid,
    kind: Relation,
}

impl GridRelation {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `Greater` means `x ≻ y`; `None` when the data do not determine it.
    pub fn compare(&self, x: usize, y: usize) -> Option<Ordering> {
        match &self.kind {
            Relation::Ranked(rank) => Some(rank[x]?.cmp(&rank[y]?)),
            Relation::Pairs { map, covered } => {
                if x == y {
                    return covered[x].then_some(Ordering::Equal);
                }
                let (key, flip) = if x < y { ((x, y), false) } else { ((y, x), true) };
                match map.get(&key)? {
                    Stated::Known(o) => Some(if flip { o.reverse() } else { *o }),
                    Stated::Conflict => None,
                }
            }
        }
    }

    pub fn covered(&self, x: usize) -> bool {
        match &self.kind {
            Relation::Ranked(rank) => rank[x].is_some(),
            Relation::Pairs { covered, .. } => covered[x],
        }
    }

    pub fn is_complete_grid(&self) -> bool {
        matches!(&self.kind, Relation::Ranked(rank) if rank.iter().all(Option::is_some))
    }

    pub fn rank(&self, x: usize) -> Option<i64> {
        match &self.kind {
            Relation::Ranked(rank) => rank[x],
            Relation::Pairs { .. } => None,
        }
    }

    pub(crate) fn stated_pairs(&self) -> Option<&BTreeMap<(usize, usize), Stated>> {
        match &self.kind {
            Relation::Ranked(_) => None,
            Relation::Pairs { map, .. } => Some(map),
        }
    }

    pub(crate) fn is_conflict(s: &Stated) -> bool {
        *s == Stated::Conflict
    }
}

/// Ranks alternatives by decreasing Choquet value; values within the
/// default tolerance of a class's top value share its rank.
pub fn induced_order(m: &MobiusRep, model: &ProductModel, alts: &[Alternative]) -> Result<PreferenceStructure> {
    induced_order_with_tolerance(m, model, alts, DEFAULT_TOLERANCE)
}

pub fn induced_order_with_tolerance(
    m: &MobiusRep,
    model: &ProductModel,
    alts: &[Alternative],
    tol: f64,
) -> Result<PreferenceStructure> {
    if m.n() != model.n() {
        return Err(Error::LengthMismatch { expected: model.n(), found: m.n() });
    }
    let values = alts
        .iter()
        .map(|x| choquet_mobius(m, &model.scores(x)?))
        .collect::<Result<Vec<f64>>>()?;
    let ranks = ranks_from_values(&values, tol);
    PreferenceStructure::new(model.clone(), alts.to_vec(), PreferenceData::Ranked(ranks))
}

/// Dense ranks, larger value gets larger rank, ties within `tol` of the
/// class's largest member.
pub fn ranks_from_values(values: &[f64], tol: f64) -> Vec<i64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    let mut class = vec![0i64; values.len()];
    let mut current = 0;
    let mut anchor = f64::INFINITY;
    for (k, &i) in order.iter().enumerate() {
        if k == 0 {
            anchor = values[i];
        } else if values[i] < anchor - tol {
            current += 1;
            anchor = values[i];
        }
        class[i] = current;
    }
    class.iter().map(|c| current - c).collect()
}

/// Per criterion, a weak order over its levels given as ranks (larger is better).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalOrder {
    ranks: Vec<Vec<i64>>,
}

impl MarginalOrder {
    pub fn new(ranks: Vec<Vec<i64>>) -> Self {
        MarginalOrder { ranks }
    }

    /// The declared level order: later levels are better.
    pub fn declared(dims: &[usize]) -> Self {
        MarginalOrder { ranks: dims.iter().map(|&d| (0..d as i64).collect()).collect() }
    }

    pub fn ranks(&self) -> &[Vec<i64>] {
        &self.ranks
    }

    pub fn geq(&self, i: usize, a: usize, b: usize) -> bool {
        self.ranks[i][a] >= self.ranks[i][b]
    }

    pub fn gt(&self, i: usize, a: usize, b: usize) -> bool {
        self.ranks[i][a] > self.ranks[i][b]
    }

    pub fn is_max(&self, i: usize, a: usize) -> bool {
        self.ranks[i].iter().all(|&r| r <= self.ranks[i][a])
    }

    pub fn is_min(&self, i: usize, a: usize) -> bool {
        self.ranks[i].iter().all(|&r| r >= self.ranks[i][a])
    }
}

/// Reasons a marginal order could not be derived.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MarginalFailure {
    /// `(i, a, b, x, y)` with `a x ≻ b x` and `b y ≻ a y` (grid indices of `a x`, `b y`).
    pub reversals: Vec<(usize, usize, usize, usize, usize)>,
    /// `(i, a, b)` whose comparison is not fixed by the data.
    pub undetermined: Vec<(usize, usize, usize)>,
    /// `(i, a, b)` with `a x ∼ b x` everywhere.
    pub collapsed: Vec<(usize, usize, usize)>,
    /// Available when the only problem is collapsed levels.
    pub weak_order: Option<MarginalOrder>,
}

impl fmt::Display for MarginalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, a, b, x, y) in &self.reversals {
            parts.push(format!("criterion {i}: levels {a},{b} reverse between alternatives {x} and {y}"));
        }
        for (i, a, b) in &self.undetermined {
            parts.push(format!("criterion {i}: levels {a},{b} undetermined"));
        }
        for (i, a, b) in &self.collapsed {
            parts.push(format!("criterion {i}: levels {a},{b} are indifferent everywhere (collapsed)"));
        }
        f.write_str(&parts.join("; "))
    }
}

/// Derives `a ≽_i b ⟺ a x ≽ b x for all x_{-i}` from the data.
pub fn marginal_order(prefs: &PreferenceStructure) -> core::result::Result<MarginalOrder, MarginalFailure> {
    let rel = prefs.relation().map_err(|_| MarginalFailure::default())?;
    marginal_order_from(&rel)
}

pub fn marginal_order_from(rel: &GridRelation) -> core::result::Result<MarginalOrder, MarginalFailure> {
    let grid = rel.grid();
    let mut fail = MarginalFailure::default();
    let mut ranks = Vec::new();
    for i in 0..grid.n() {
        let d = grid.dims()[i];
        let contexts = grid.contexts(&[i]);
        // weak[a][b]: a ≽_i b established
        let mut weak = vec![vec![false; d]; d];
        for a in 0..d {
            weak[a][a] = true;
            for b in a + 1..d {
                let (mut gt, mut lt, mut unknown) = (None, None, false);
                for &ctx in &contexts {
                    let (xa, xb) = (grid.with_level(ctx, i, a), grid.with_level(ctx, i, b));
                    match rel.compare(xa, xb) {
                        Some(Ordering::Greater) => gt = gt.or(Some((xa, xb))),
                        Some(Ordering::Less) => lt = lt.or(Some((xa, xb))),
                        Some(Ordering::Equal) => {}
                        None => unknown = true,
                    }
                }
                match (gt, lt) {
                    (Some((xa, _)), Some((_, yb))) => fail.reversals.push((i, a, b, xa, yb)),
                    _ if unknown => fail.undetermined.push((i, a, b)),
                    (None, None) => {
                        fail.collapsed.push((i, a, b));
                        weak[a][b] = true;
                        weak[b][a] = true;
                    }
                    (Some(_), None) => weak[a][b] = true,
                    (None, Some(_)) => weak[b][a] = true,
                }
            }
        }
        let r: Vec<i64> = (0..d)
            .map(|a| (0..d).filter(|&b| weak[a][b] && !weak[b][a]).count() as i64)
            .collect();
        for a in 0..d {
            for b in 0..d {
                if weak[a][b] != (r[a] >= r[b]) && fail.reversals.is_empty() && fail.undetermined.is_empty() {
                    fail.undetermined.push((i, a, b));
                }
            }
        }
        ranks.push(r);
    }
    let order = MarginalOrder { ranks };
    if fail.reversals.is_empty() && fail.undetermined.is_empty() && fail.collapsed.is_empty() {
        Ok(order)
    } else {
        if fail.reversals.is_empty() && fail.undetermined.is_empty() {
            fail.weak_order = Some(order);
        }
        Err(fail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::Capacity;

    fn unit_model(dims: &[usize]) -> ProductModel {
        ProductModel::from_values(dims.iter().map(|&d| (0..d).map(|k| k as f64).collect()).collect())
            .unwrap()
    }

    fn grid_alts(model: &ProductModel) -> Vec<Alternative> {
        crate::product::enumerate_grid(model).unwrap()
    }

    #[test]
    fn induced_order_additive_example() {
        let model = unit_model(&[2, 2]);
        let m = Capacity::additive(&[0.5, 0.5]).unwrap().to_mobius();
        let p = induced_order(&m, &model, &grid_alts(&model)).unwrap();
        // grid order: (0,0) (0,1) (1,0) (1,1)
        assert_eq!(p.ranks().unwrap(), &[0, 1, 1, 2]);
    }

    #[test]
    fn induced_order_min_example() {
        let model = unit_model(&[2, 2]);
        let m = Capacity::minimum(2).unwrap().to_mobius();
        let p = induced_order(&m, &model, &grid_alts(&model)).unwrap();
        assert_eq!(p.ranks().unwrap(), &[0, 0, 0, 1]);
        let one = induced_order(&m, &model, &[vec![1, 0]]).unwrap();
        assert_eq!(one.ranks().unwrap(), &[0]);
    }

    #[test]
    fn induced_order_needs_values() {
        let bare = ProductModel::new(vec![
            crate::product::CriterionScale::new("a", vec!["x".into(), "y".into()], None),
            crate::product::CriterionScale::new("b", vec!["x".into(), "y".into()], None),
        ])
        .unwrap();
        let m = Capacity::minimum(2).unwrap().to_mobius();
        assert_eq!(induced_order(&m, &bare, &[vec![0, 0]]), Err(Error::MissingValues(0)));
    }

    #[test]
    fn marginal_order_matches_declared() {
        let model = ProductModel::from_values(vec![vec![0.0, 0.4, 1.0], vec![0.1, 0.2, 0.9]]).unwrap();
        let m = MobiusRep::new(2, vec![0.0, 0.3, 0.6, 0.1]).unwrap();
        let p = induced_order(&m, &model, &grid_alts(&model)).unwrap();
        assert_eq!(marginal_order(&p).unwrap(), MarginalOrder::declared(&[3, 3]));
    }

    #[test]
    fn marginal_order_reports_reversal() {
        let model = unit_model(&[2, 2]);
        let alts = vec![vec![1, 0], vec![0, 0], vec![1, 1], vec![0, 1]];
        let pairs = vec![
            PairStatement { better: 0, worse: 1, strict: true },
            PairStatement { better: 3, worse: 2, strict: true },
        ];
        let p = PreferenceStructure::new(model, alts, PreferenceData::Pairs(pairs)).unwrap();
        let fail = marginal_order(&p).unwrap_err();
        assert_eq!(fail.reversals.len(), 1);
        assert_eq!(fail.reversals[0].0, 0);
    }

    #[test]
    fn marginal_order_rejects_irrelevant_criterion() {
        let model = unit_model(&[3, 3]);
        let m = Capacity::additive(&[0.0, 1.0]).unwrap().to_mobius();
        let p = induced_order(&m, &model, &grid_alts(&model)).unwrap();
        let fail = marginal_order(&p).unwrap_err();
        assert_eq!(fail.collapsed, vec![(0, 0, 1), (0, 0, 2), (0, 1, 2)]);
        assert!(fail.weak_order.is_some());
    }

    #[test]
    fn partial_pairs_leave_levels_undetermined() {
        let model = unit_model(&[2, 2]);
        let alts = vec![vec![1, 0], vec![0, 0]];
        let pairs = vec![PairStatement { better: 0, worse: 1, strict: true }];
        let p = PreferenceStructure::new(model, alts, PreferenceData::Pairs(pairs)).unwrap();
        let fail = marginal_order(&p).unwrap_err();
        assert!(fail.undetermined.contains(&(0, 0, 1)));
    }

    #[test]
    fn conflicting_ranks_rejected() {
        let model = unit_model(&[2, 2]);
        let err = PreferenceStructure::new(model, vec![vec![0, 0], vec![0, 0]], PreferenceData::Ranked(vec![1, 2]));
        assert!(matches!(err, Err(Error::InvalidPreferences(_))));
    }

    #[test]
    fn ranks_group_within_tolerance() {
        assert_eq!(ranks_from_values(&[0.5, 0.5 + 1e-12, 0.2, 0.9], 1e-9), vec![1, 1, 0, 2]);
    }
}
