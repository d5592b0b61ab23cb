//! JSON file formats and their conversion to core types.

use std::collections::BTreeMap;
use std::path::Path;

use choquet_core::prefs::{PairStatement, PreferenceData};
use choquet_core::subset::all_subsets;
use choquet_core::{Capacity, CriterionScale, MobiusRep, PreferenceStructure, ProductModel, Subset};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SetFunctionKind {
    Capacity,
    Mobius,
}

/// A capacity or its Möbius masses, keyed by comma-joined members.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFunctionFile {
    pub n: usize,
    pub kind: SetFunctionKind,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionFile {
    pub name: String,
    pub levels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub criteria: Vec<CriterionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<SetFunctionFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PrefsKind {
    Ranked,
    Pairs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairFile {
    pub better: usize,
    pub worse: usize,
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrefsFile {
    pub kind: PrefsKind,
    pub alternatives: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairFile>>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn subset_key(a: Subset) -> String {
    a.members().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_key(key: &str, n: usize) -> Result<Subset, CliError> {
    let key = key.trim();
    if key.is_empty() || key == "∅" {
        return Ok(Subset(0));
    }
    let mut members = Vec::new();
    for part in key.split(',') {
        let i: usize = part.trim().parse().map_err(|_| CliError::Input(format!("bad subset key {key:?}")))?;
        if i >= n {
            return Err(CliError::Input(format!("subset key {key:?} names criterion {i} of {n}")));
        }
        members.push(i);
    }
    Ok(Subset::from_members(&members))
}

impl SetFunctionFile {
    pub fn from_mobius(m: &MobiusRep) -> Self {
        let values = all_subsets(m.n()).skip(1).map(|a| (subset_key(a), m.coeff(a))).collect();
        SetFunctionFile { n: m.n(), kind: SetFunctionKind::Mobius, values }
    }

    pub fn from_capacity(c: &Capacity) -> Self {
        let values = all_subsets(c.n()).skip(1).map(|a| (subset_key(a), c.value(a))).collect();
        SetFunctionFile { n: c.n(), kind: SetFunctionKind::Capacity, values }
    }

    /// Möbius masses; a capacity must list every nonempty subset.
    pub fn to_mobius(&self) -> Result<MobiusRep, CliError> {
        let n = self.n;
        let mut dense: Vec<Option<f64>> = vec![None; 1usize.checked_shl(n as u32).unwrap_or(0)];
        if dense.is_empty() || n > choquet_core::subset::MAX_CRITERIA {
            return Err(CliError::Input(format!("unsupported number of criteria {n}")));
        }
        for (key, &v) in &self.values {
            let a = parse_key(key, n)?;
            if dense[a.bits()].replace(v).is_some() {
                return Err(CliError::Input(format!("subset {a} listed twice")));
            }
        }
        match self.kind {
            SetFunctionKind::Mobius => {
                let coeffs = dense.into_iter().map(|v| v.unwrap_or(0.0)).collect();
                MobiusRep::new(n, coeffs).map_err(CliError::from)
            }
            SetFunctionKind::Capacity => {
                let mut values = Vec::with_capacity(dense.len());
                for (bits, v) in dense.into_iter().enumerate() {
                    match (bits, v) {
                        (0, v) => values.push(v.unwrap_or(0.0)),
                        (_, Some(v)) => values.push(v),
                        (_, None) => {
                            return Err(CliError::Input(format!("capacity misses subset {}", Subset(bits as u32))));
                        }
                    }
                }
                Ok(Capacity::new(n, values)?.to_mobius())
            }
        }
    }
}

impl ModelFile {
    pub fn to_model(&self) -> Result<ProductModel, CliError> {
        let scales = self
            .criteria
            .iter()
            .map(|c| CriterionScale::new(c.name.clone(), c.levels.clone(), c.values.clone()))
            .collect();
        Ok(ProductModel::new(scales)?)
    }

    pub fn from_model(model: &ProductModel, m: Option<&MobiusRep>) -> Self {
        let criteria = model
            .scales()
            .iter()
            .map(|s| CriterionFile { name: s.name.clone(), levels: s.levels.clone(), values: s.values.clone() })
            .collect();
        ModelFile { criteria, capacity: m.map(SetFunctionFile::from_mobius) }
    }
}

impl PrefsFile {
    pub fn from_structure(p: &PreferenceStructure) -> Self {
        let alternatives = p.alternatives().to_vec();
        match p.data() {
            PreferenceData::Ranked(r) => PrefsFile { kind: PrefsKind::Ranked, alternatives, ranks: Some(r.clone()), pairs: None },
            PreferenceData::Pairs(ps) => PrefsFile {
                kind: PrefsKind::Pairs,
                alternatives,
                ranks: None,
                pairs: Some(ps.iter().map(|s| PairFile { better: s.better, worse: s.worse, strict: s.strict }).collect()),
            },
        }
    }

    fn data(&self) -> Result<PreferenceData, CliError> {
        match self.kind {
            PrefsKind::Ranked => {
                let ranks = self.ranks.clone().ok_or_else(|| CliError::Input("ranked preferences without \"ranks\"".into()))?;
                Ok(PreferenceData::Ranked(ranks))
            }
            PrefsKind::Pairs => {
                let pairs = self.pairs.as_ref().ok_or_else(|| CliError::Input("pair preferences without \"pairs\"".into()))?;
                Ok(PreferenceData::Pairs(
                    pairs.iter().map(|p| PairStatement { better: p.better, worse: p.worse, strict: p.strict }).collect(),
                ))
            }
        }
    }

    /// Level counts implied by the alternatives.
    fn implied_dims(&self) -> Result<Vec<usize>, CliError> {
        let n = self.alternatives.first().map_or(0, Vec::len);
        let mut dims = vec![1; n];
        for x in &self.alternatives {
            if x.len() != n {
                return Err(CliError::Input(format!("alternatives of lengths {n} and {}", x.len())));
            }
            for (d, &l) in dims.iter_mut().zip(x) {
                *d = (*d).max(l + 1);
            }
        }
        Ok(dims)
    }

    /// Preferences over `model`, or over bare levels `0..` when none is given.
    pub fn to_structure(&self, model: Option<ProductModel>) -> Result<PreferenceStructure, CliError> {
        let model = match model {
            Some(m) => m,
            None => {
                let scales = self
                    .implied_dims()?
                    .into_iter()
                    .enumerate()
                    .map(|(i, d)| CriterionScale::new(format!("c{i}"), (0..d).map(|k| k.to_string()).collect(), None))
                    .collect();
                ProductModel::new(scales)?
            }
        };
        Ok(PreferenceStructure::new(model, self.alternatives.clone(), self.data()?)?)
    }
}

/// A values file: either a plain array of per-criterion values or a model file.
pub fn read_values(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let raw: serde_json::Value = read_json(path)?;
    if raw.is_array() {
        return serde_json::from_value(raw).map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    let model: ModelFile = serde_json::from_value(raw).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    model
        .criteria
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.values.ok_or_else(|| CliError::Input(format!("criterion {i} carries no values"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        assert_eq!(subset_key(Subset::from_members(&[0, 2])), "0,2");
        assert_eq!(parse_key("0, 2", 3).unwrap(), Subset::from_members(&[0, 2]));
        assert_eq!(parse_key("", 3).unwrap(), Subset(0));
        assert!(parse_key("3", 3).is_err());
        assert!(parse_key("a", 3).is_err());
    }

    #[test]
    fn capacity_and_mobius_files_agree() {
        let c = Capacity::new(2, vec![0.0, 0.3, 0.6, 1.0]).unwrap();
        let from_c = SetFunctionFile::from_capacity(&c).to_mobius().unwrap();
        let from_m = SetFunctionFile::from_mobius(&c.to_mobius()).to_mobius().unwrap();
        assert_eq!(from_c, from_m);
        let mut partial = SetFunctionFile::from_capacity(&c);
        partial.values.remove("0,1");
        assert!(partial.to_mobius().is_err());
    }
}
