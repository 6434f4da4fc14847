use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BinSeq;
use crate::error::{Error, Result};

/// A finite partial map from coordinates to binary sequences: a condition of
/// the many-coordinate Cohen poset.
///
/// Stored normalized: a coordinate mapped to the empty sequence is the same
/// condition as the coordinate being absent, so empty values are dropped.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, BinSeq>", into = "BTreeMap<u32, BinSeq>")]
pub struct ManyCondition {
    entries: BTreeMap<u32, BinSeq>,
}

impl ManyCondition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u32, BinSeq)>) -> Self {
        ManyCondition {
            entries: entries.into_iter().filter(|(_, v)| !v.is_empty()).collect(),
        }
    }

    /// The value at `coord`, empty when absent.
    pub fn get(&self, coord: u32) -> BinSeq {
        self.entries.get(&coord).copied().unwrap_or_default()
    }

    pub fn set(&mut self, coord: u32, value: BinSeq) {
        if value.is_empty() {
            self.entries.remove(&coord);
        } else {
            self.entries.insert(coord, value);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn domain(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, BinSeq)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn contains_coord(&self, coord: u32) -> bool {
        self.entries.contains_key(&coord)
    }

    pub fn total_len(&self) -> usize {
        self.entries.values().map(BinSeq::len).sum()
    }

    pub fn max_value_len(&self) -> usize {
        self.entries.values().map(BinSeq::len).max().unwrap_or(0)
    }

    /// `self <= other`: every coordinate of `other` is present here and end-extended.
    pub fn extends(&self, other: &ManyCondition) -> bool {
        other
            .entries
            .iter()
            .all(|(k, v)| self.entries.get(k).is_some_and(|mine| mine.extends(v)))
    }

    pub fn compatible(&self, other: &ManyCondition) -> bool {
        self.entries.iter().all(|(k, v)| match other.entries.get(k) {
            Some(w) => v.compatible(w),
            None => true,
        })
    }

    /// Coordinate-wise concatenation `self(β) ⌢ tail(β)`.
    pub fn concat(&self, tail: &ManyCondition) -> Result<ManyCondition> {
        let mut out = self.clone();
        for (k, v) in tail.iter() {
            out.set(k, self.get(k).concat(&v)?);
        }
        Ok(out)
    }

    /// The part of `self` beyond `base`, coordinate-wise. Requires `self <= base`.
    pub fn strip_prefix(&self, base: &ManyCondition) -> Result<ManyCondition> {
        if !self.extends(base) {
            return Err(Error::NotBelow);
        }
        Ok(ManyCondition::from_entries(
            self.iter().map(|(k, v)| (k, v.suffix_from(base.get(k).len()))),
        ))
    }

    pub fn map_values(&self, mut f: impl FnMut(u32, BinSeq) -> BinSeq) -> ManyCondition {
        ManyCondition::from_entries(self.iter().map(|(k, v)| (k, f(k, v))))
    }

    pub(crate) fn entries_mut(&mut self) -> &mut BTreeMap<u32, BinSeq> {
        &mut self.entries
    }
}

impl From<BTreeMap<u32, BinSeq>> for ManyCondition {
    fn from(m: BTreeMap<u32, BinSeq>) -> Self {
        ManyCondition::from_entries(m)
    }
}

// keys arrive as strings from JSON objects, including through buffered
// (tagged or flattened) contexts where integer keys are not recognized
impl TryFrom<BTreeMap<String, BinSeq>> for ManyCondition {
    type Error = String;

    fn try_from(m: BTreeMap<String, BinSeq>) -> std::result::Result<Self, String> {
        m.into_iter()
            .map(|(k, v)| {
                k.parse::<u32>()
                    .map(|k| (k, v))
                    .map_err(|_| format!("coordinate {k:?} is not a non-negative integer"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(ManyCondition::from_entries)
    }
}

impl From<ManyCondition> for BTreeMap<u32, BinSeq> {
    fn from(m: ManyCondition) -> Self {
        m.entries
    }
}

impl PartialOrd for ManyCondition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total size first, then entries lexicographically.
impl Ord for ManyCondition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_len()
            .cmp(&other.total_len())
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl fmt::Debug for ManyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl fmt::Display for ManyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}

/// Shorthand for tests and fixtures; panics on malformed bit strings.
pub fn mc(entries: &[(u32, &str)]) -> ManyCondition {
    ManyCondition::from_entries(entries.iter().map(|&(k, v)| (k, crate::bits::bs(v))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_values_are_dropped() {
        let m = mc(&[(0, "1"), (1, "")]);
        assert_eq!(m, mc(&[(0, "1")]));
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn extension_order() {
        let p = mc(&[(0, "101"), (2, "1")]);
        assert!(p.extends(&mc(&[(0, "10")])));
        assert!(p.extends(&ManyCondition::new()));
        assert!(!p.extends(&mc(&[(1, "0")])));
        assert!(!p.extends(&mc(&[(0, "11")])));
        assert_eq!(p.strip_prefix(&mc(&[(0, "1")])).unwrap(), mc(&[(0, "01"), (2, "1")]));
        assert_eq!(p.strip_prefix(&mc(&[(1, "1")])), Err(Error::NotBelow));
    }

    #[test]
    fn json_shape() {
        let m = mc(&[(0, "01"), (3, "1")]);
        let j = serde_json::to_string(&m).unwrap();
        assert_eq!(j, r#"{"0":"01","3":"1"}"#);
        let back: ManyCondition = serde_json::from_str(r#"{"0":"01","3":"1","4":""}"#).unwrap();
        assert_eq!(back, m);
    }
}
