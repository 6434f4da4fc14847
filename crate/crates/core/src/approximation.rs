//! The δ-approximation property for a pair of finite set families.
//!
//! Subsets of the universe `{0..u-1}` are bit masks (bit `i` = element `i`).
//! A pair `(W, V)` has the property when every `A ∈ V` whose intersections
//! with the small members of `W` all lie in `W` is itself in `W`.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BinSeq;
use crate::error::{Error, Result};

pub const MAX_UNIVERSE: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModelPair {
    pub universe: usize,
    pub delta: usize,
    pub w: BTreeSet<u64>,
    pub v: BTreeSet<u64>,
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    universe: usize,
    delta: usize,
    #[serde(rename = "W")]
    w: Vec<Vec<usize>>,
    #[serde(rename = "V")]
    v: Vec<Vec<usize>>,
}

fn to_mask(universe: usize, set: &[usize]) -> Result<u64> {
    set.iter().try_fold(0u64, |m, &i| {
        if i < universe {
            Ok(m | 1 << i)
        } else {
            Err(Error::InvalidInput(format!("element {i} outside universe of size {universe}")))
        }
    })
}

pub fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

impl FiniteModelPair {
    pub fn new(universe: usize, delta: usize, w: BTreeSet<u64>, v: BTreeSet<u64>) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::bound("universe size", MAX_UNIVERSE));
        }
        if delta == 0 {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        let limit = 1u64 << universe;
        if let Some(bad) = w.iter().chain(&v).find(|&&m| m >= limit) {
            return Err(Error::InvalidInput(format!(
                "set {:?} leaves the universe",
                mask_elements(*bad)
            )));
        }
        if let Some(missing) = w.difference(&v).next() {
            return Err(Error::InvalidInput(format!(
                "W member {:?} is not in V",
                mask_elements(*missing)
            )));
        }
        Ok(FiniteModelPair { universe, delta, w, v })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PairJson = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let conv = |sets: &[Vec<usize>]| -> Result<BTreeSet<u64>> {
            sets.iter().map(|s| to_mask(raw.universe, s)).collect()
        };
        Self::new(raw.universe, raw.delta, conv(&raw.w)?, conv(&raw.v)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let conv = |sets: &BTreeSet<u64>| sets.iter().map(|&m| mask_elements(m)).collect();
        serde_json::to_value(PairJson {
            universe: self.universe,
            delta: self.delta,
            w: conv(&self.w),
            v: conv(&self.v),
        })
        .expect("plain data")
    }

    /// Lexicographic key of the characteristic vector, element 0 first.
    pub fn order_key(&self, mask: u64) -> u64 {
        (0..self.universe).fold(0, |k, i| k << 1 | (mask >> i & 1))
    }

    /// A random pair on a universe of `1..=max_universe` points. `W` always
    /// contains the empty set and the singletons.
    pub fn random(rng: &mut impl Rng, max_universe: usize) -> Self {
        let universe = rng.gen_range(1..=max_universe);
        let all = 1u64 << universe;
        let mut w: BTreeSet<u64> = (0..universe).map(|i| 1u64 << i).collect();
        w.insert(0);
        let density = rng.gen_range(0.1..0.6);
        for m in 0..all {
            if rng.gen_bool(density) {
                w.insert(m);
            }
        }
        let mut v = w.clone();
        for m in 0..all {
            if rng.gen_bool(0.3) {
                v.insert(m);
            }
        }
        let delta = rng.gen_range(1..=universe + 1);
        FiniteModelPair { universe, delta, w, v }
    }

    /// The `{0,1,2}` family: `W` is every subset of size at most 2 and `V`
    /// adds the whole universe.
    pub fn triangle(delta: usize) -> Self {
        let w: BTreeSet<u64> = (0..8u64).filter(|m| m.count_ones() <= 2).collect();
        let mut v = w.clone();
        v.insert(0b111);
        FiniteModelPair { universe: 3, delta, w, v }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Counterexample { witness: Vec<usize> },
}

fn approximated(a: u64, w: &BTreeSet<u64>, delta: usize) -> bool {
    w.iter()
        .filter(|b| (b.count_ones() as usize) < delta)
        .all(|b| w.contains(&(a & b)))
}

/// The first `A ∈ V \ W` all of whose small approximations lie in `W`.
pub fn check_approximation(m: &FiniteModelPair) -> Verdict {
    let mut candidates: Vec<u64> = m.v.difference(&m.w).copied().collect();
    candidates.sort_by_key(|&a| m.order_key(a));
    candidates
        .into_iter()
        .find(|&a| approximated(a, &m.w, m.delta))
        .map_or(Verdict::Holds, |a| Verdict::Counterexample {
            witness: mask_elements(a),
        })
}

/// Whether `g` (bit `i` = membership of `i`) is outside `W` although all its
/// intersections with members of `W` of size below `delta` are in `W`.
pub fn generic_shape_violation(g: &BinSeq, w: &BTreeSet<u64>, delta: usize) -> bool {
    let mask = g
        .iter()
        .enumerate()
        .fold(0u64, |m, (i, b)| if b { m | 1 << i } else { m });
    !w.contains(&mask) && approximated(mask, w, delta)
}
