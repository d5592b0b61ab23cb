//! Finite product sets `X_1 × … × X_n` and their alternatives.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default cap on the number of alternatives in an enumerated grid.
pub const GRID_CAP: usize = 1_000_000;

/// One criterion: ordered level labels and optional values along them.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionScale {
    pub name: String,
    pub levels: Vec<String>,
    pub values: Option<Vec<f64>>,
}

impl CriterionScale {
    pub fn new(name: impl Into<String>, levels: Vec<String>, values: Option<Vec<f64>>) -> Self {
        CriterionScale { name: name.into(), levels, values }
    }

    /// Scale with levels labelled `0..len` and the given values.
    pub fn with_values(name: impl Into<String>, values: Vec<f64>) -> Self {
        let levels = (0..values.len()).map(|k| format!("{k}")).collect();
        CriterionScale { name: name.into(), levels, values: Some(values) }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    fn validate(&self, criterion: usize) -> Result<()> {
        let invalid = |reason: String| Err(Error::InvalidScale { criterion, reason });
        if self.levels.is_empty() {
            return invalid("scale has no levels".into());
        }
        for (k, label) in self.levels.iter().enumerate() {
            if self.levels[..k].contains(label) {
                return invalid(format!("duplicate level label {label:?}"));
            }
        }
        if let Some(values) = &self.values {
            if values.len() != self.levels.len() {
                return invalid(format!(
                    "{} values for {} levels",
                    values.len(),
                    self.levels.len()
                ));
            }
            if let Some(k) = values.iter().position(|v| !v.is_finite()) {
                return invalid(format!("value at level {k} is not finite"));
            }
            if let Some(k) = values.windows(2).position(|w| w[1] <= w[0]) {
                return invalid(format!(
                    "values must increase strictly along the levels (levels {} and {} collapse or reverse)",
                    k,
                    k + 1
                ));
            }
        }
        Ok(())
    }
}

/// The product set together with optional value functions.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductModel {
    scales: Vec<CriterionScale>,
}

impl ProductModel {
    /// Checks label uniqueness and strictly increasing values on every scale.
    pub fn new(scales: Vec<CriterionScale>) -> Result<Self> {
        if scales.len() > crate::subset::MAX_CRITERIA {
            return Err(Error::TooManyCriteria(scales.len()));
        }
        for (i, s) in scales.iter().enumerate() {
            s.validate(i)?;
        }
        Ok(ProductModel { scales })
    }

    /// Model whose criteria are named `c0, c1, ..` with the given values.
    pub fn from_values(values: Vec<Vec<f64>>) -> Result<Self> {
        let scales = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| CriterionScale::with_values(format!("c{i}"), v))
            .collect();
        ProductModel::new(scales)
    }

    pub fn n(&self) -> usize {
        self.scales.len()
    }

    pub fn scales(&self) -> &[CriterionScale] {
        &self.scales
    }

    pub fn dims(&self) -> Vec<usize> {
        self.scales.iter().map(CriterionScale::len).collect()
    }

    pub fn has_values(&self) -> bool {
        self.scales.iter().all(|s| s.values.is_some())
    }

    /// Problems that make the model unsuitable for axiom analysis.
    pub fn analysis_issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n() < 2 {
            out.push(format!("axiom analysis needs at least 2 criteria, found {}", self.n()));
        }
        for (i, s) in self.scales.iter().enumerate() {
            if s.len() < 2 {
                out.push(format!("criterion {i} ({}) has fewer than 2 levels", s.name));
            }
        }
        out
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.dims(), GRID_CAP)
    }

    /// Value vector `(f_1(x_1), .., f_n(x_n))`.
    pub fn scores(&self, x: &[usize]) -> Result<Vec<f64>> {
        self.check_alternative(x)?;
        self.scales
            .iter()
            .enumerate()
            .map(|(i, s)| match &s.values {
                Some(v) => Ok(v[x[i]]),
                None => Err(Error::MissingValues(i)),
            })
            .collect()
    }

    pub fn check_alternative(&self, x: &[usize]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), found: x.len() });
        }
        for (i, (&level, s)) in x.iter().zip(&self.scales).enumerate() {
            if level >= s.len() {
                return Err(Error::LevelOutOfRange { criterion: i, level });
            }
        }
        Ok(())
    }

    /// Replaces the value functions, keeping names and labels.
    pub fn with_values(&self, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), found: values.len() });
        }
        let scales = self
            .scales
            .iter()
            .zip(values)
            .map(|(s, v)| CriterionScale { values: Some(v), ..s.clone() })
            .collect();
        ProductModel::new(scales)
    }
}

/// A point of the product set given by one level index per criterion.
pub type Alternative = Vec<usize>;

/// Mixed-radix indexing of a product grid; the first criterion is the most
/// significant digit, so index order is lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    dims: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    pub fn new(dims: Vec<usize>, cap: usize) -> Result<Self> {
        let size: u128 = dims.iter().map(|&d| d as u128).product();
        if size > cap as u128 {
            return Err(Error::GridTooLarge { size, cap });
        }
        let mut strides = alloc::vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        Ok(Grid { len: size as usize, dims, strides })
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn try_index(&self, x: &[usize]) -> Option<usize> {
        if x.len() != self.n() || x.iter().zip(&self.dims).any(|(a, d)| a >= d) {
            return None;
        }
        Some(self.index(x))
    }

    pub fn coords(&self, idx: usize) -> Alternative {
        (0..self.n()).map(|i| self.level(idx, i)).collect()
    }

    pub fn level(&self, idx: usize, i: usize) -> usize {
        idx / self.strides[i] % self.dims[i]
    }

    /// Index of the point equal to `idx` except for level `level` on criterion `i`.
    pub fn with_level(&self, idx: usize, i: usize, level: usize) -> usize {
        idx - self.level(idx, i) * self.strides[i] + level * self.strides[i]
    }

    /// Indices of the points sharing all coordinates outside `free` with
    /// `idx`, with the coordinates in `free` set to zero; one representative
    /// per context `x_{-free}`.
    pub fn contexts(&self, free: &[usize]) -> Vec<usize> {
        (0..self.len)
            .filter(|&idx| free.iter().all(|&i| self.level(idx, i) == 0))
            .collect()
    }
}

/// All alternatives of the model in lexicographic order.
pub fn enumerate_grid(model: &ProductModel) -> Result<Vec<Alternative>> {
    enumerate_grid_capped(model, GRID_CAP)
}

pub fn enumerate_grid_capped(model: &ProductModel, cap: usize) -> Result<Vec<Alternative>> {
    let grid = Grid::new(model.dims(), cap)?;
    Ok((0..grid.len()).map(|k| grid.coords(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn model(dims: &[usize]) -> ProductModel {
        ProductModel::from_values(dims.iter().map(|&d| (0..d).map(|k| k as f64).collect()).collect())
            .unwrap()
    }

    #[test]
    fn grid_enumeration_examples() {
        let g = enumerate_grid(&model(&[2, 3])).unwrap();
        assert_eq!(g, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(enumerate_grid(&model(&[1, 4])).unwrap().len(), 4);
        assert_eq!(enumerate_grid(&model(&[3, 3, 3])).unwrap().len(), 27);
        assert!(matches!(
            enumerate_grid_capped(&model(&[10, 10]), 50),
            Err(Error::GridTooLarge { size: 100, cap: 50 })
        ));
    }

    #[test]
    fn grid_index_arithmetic() {
        let g = Grid::new(vec![2, 3, 4], GRID_CAP).unwrap();
        for idx in 0..g.len() {
            assert_eq!(g.index(&g.coords(idx)), idx);
        }
        let idx = g.index(&[1, 2, 3]);
        assert_eq!(g.coords(g.with_level(idx, 1, 0)), vec![1, 0, 3]);
        assert_eq!(g.contexts(&[0, 2]).len(), 3);
        assert_eq!(g.try_index(&[2, 0, 0]), None);
    }

    #[test]
    fn scale_validation() {
        let dup = CriterionScale::new("a", vec!["x".into(), "x".into()], None);
        assert!(ProductModel::new(vec![dup]).is_err());
        let collapsed = CriterionScale::with_values("a", vec![0.0, 1.0, 1.0]);
        let err = ProductModel::new(vec![collapsed]).unwrap_err();
        assert!(matches!(err, Error::InvalidScale { criterion: 0, .. }));
        let m = model(&[1, 3]);
        assert_eq!(m.analysis_issues().len(), 1);
    }

    #[test]
    fn scores_lookup() {
        let m = ProductModel::from_values(vec![vec![0.0, 0.5], vec![1.0, 2.0, 4.0]]).unwrap();
        assert_eq!(m.scores(&[1, 2]).unwrap(), vec![0.5, 4.0]);
        assert!(matches!(m.scores(&[2, 0]), Err(Error::LevelOutOfRange { criterion: 0, level: 2 })));
        let bare = ProductModel::new(vec![CriterionScale::new("a", vec!["lo".into()], None)]).unwrap();
        assert_eq!(bare.scores(&[0]), Err(Error::MissingValues(0)));
    }
}
