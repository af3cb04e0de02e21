//! Reference data transcribed from published tables: counts, value sets,
//! orbit sizes and the explicit function listings.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use unital::{CycField, P1Value, UnitalSet};

use crate::expr::{self, ExprError};

pub const EMBEDDED_JSON: &str = include_str!("../fixtures/refdata.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RefData {
    pub version: u32,
    pub counts: BTreeMap<u32, usize>,
    pub value_sets: BTreeMap<u32, ValueSetRef>,
    pub orbit_sizes_4: Vec<usize>,
    pub families_4: Vec<Family>,
    pub theorem_seeds: BTreeMap<u32, Vec<String>>,
    #[serde(default)]
    pub theorem_notes: BTreeMap<u32, String>,
    pub listings: Vec<Block>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueSetRef {
    pub values: Vec<String>,
    pub note: Option<String>,
}

/// A named union of sextets with its stated size.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    pub size: usize,
    pub seeds: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Block {
    pub n: u32,
    pub family: String,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Entry {
    pub expr: String,
    pub source: String,
    pub verbatim_uncertain: bool,
    pub note: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum RefError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed reference data: {0}")]
    Json(#[from] serde_json::Error),
    #[error("reference expression `{expr}` for N = {n}: {err}")]
    Expr {
        n: u32,
        expr: String,
        err: ExprError,
    },
}

impl RefData {
    pub fn embedded() -> RefData {
        RefData::from_json(EMBEDDED_JSON).expect("embedded reference data is valid")
    }

    pub fn from_json(s: &str) -> Result<RefData, RefError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<RefData, RefError> {
        let s = std::fs::read_to_string(path).map_err(|source| RefError::Io {
            path: path.display().to_string(),
            source,
        })?;
        RefData::from_json(&s)
    }

    /// The reference value set for `n`, deduplicated after evaluation.
    pub fn value_set(&self, n: u32) -> Result<Option<BTreeSet<P1Value>>, RefError> {
        let Some(vs) = self.value_sets.get(&n) else {
            return Ok(None);
        };
        let field = CycField::new(n);
        vs.values
            .iter()
            .map(|s| expr::parse_value(&field, s).map_err(|err| ref_err(n, s, err)))
            .collect::<Result<BTreeSet<_>, _>>()
            .map(Some)
    }

    /// Union of the sextets of the stated seeds for `n`.
    pub fn theorem_set(&self, n: u32) -> Result<Option<UnitalSet>, RefError> {
        match self.theorem_seeds.get(&n) {
            Some(seeds) => sextet_union(&CycField::new(n), seeds).map(Some),
            None => Ok(None),
        }
    }
}

fn ref_err(n: u32, s: &str, err: ExprError) -> RefError {
    RefError::Expr {
        n,
        expr: s.to_string(),
        err,
    }
}

pub fn sextet_union(field: &Arc<CycField>, seeds: &[String]) -> Result<UnitalSet, RefError> {
    let n = field.order();
    let mut out = UnitalSet::new();
    for s in seeds {
        let f = expr::parse_unital(field, s).map_err(|err| ref_err(n, s, err))?;
        let six = f.sextet().map_err(|e| ref_err(n, s, ExprError::Core(e)))?;
        for g in six {
            out.insert(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixture_is_consistent() {
        let r = RefData::embedded();
        assert_eq!(
            r.counts.values().copied().collect::<Vec<_>>(),
            [6, 36, 84, 252]
        );
        let sizes: Vec<_> = (1..=4)
            .map(|n| r.value_set(n).unwrap().unwrap().len())
            .collect();
        assert_eq!(sizes, [3, 6, 11, 12]);
        assert_eq!(r.value_sets[&3].values.len(), 13);
        let mut orbit = r.orbit_sizes_4.clone();
        orbit.sort_unstable();
        assert_eq!(orbit, [6, 12, 18, 24, 36, 36, 48, 72]);
        let family_sizes: Vec<_> = r.families_4.iter().map(|f| f.size).collect();
        assert_eq!(family_sizes, r.orbit_sizes_4);
    }

    #[test]
    fn theorem_seeds_give_the_stated_counts() {
        let r = RefData::embedded();
        let sizes: Vec<_> = (1..=4)
            .map(|n| r.theorem_set(n).unwrap().unwrap().len())
            .collect();
        // One of the stated U_3 seeds repeats another sextet.
        assert_eq!(sizes, [6, 36, 78, 252]);
        assert!(r.theorem_notes.contains_key(&3));
    }

    #[test]
    fn every_entry_records_its_source() {
        let r = RefData::embedded();
        let total: usize = r.listings.iter().map(|b| b.entries.len()).sum();
        assert!(total > 300);
        for b in &r.listings {
            for e in &b.entries {
                assert!(e.source.contains(&b.family));
                assert_eq!(e.verbatim_uncertain, e.note.is_some());
            }
        }
    }

    #[test]
    fn malformed_fixture_is_an_error() {
        assert!(matches!(RefData::from_json("{}"), Err(RefError::Json(_))));
        let mut r = RefData::embedded();
        r.value_sets.get_mut(&2).unwrap().values.push("x".into());
        assert!(matches!(r.value_set(2), Err(RefError::Expr { .. })));
    }
}
