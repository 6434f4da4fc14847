//! Seeded families of open dense sets on the Cohen posets.
//!
//! Every kind here is downward closed. `below_or_incompatible` is dense
//! everywhere; the length and substring kinds are dense wherever the
//! truncation leaves room to extend.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BinSeq;
use crate::cohen::ManyCondition;
use crate::order::DenseSet;

fn has_substring(p: &BinSeq, s: &BinSeq) -> bool {
    s.len() <= p.len() && (0..=p.len() - s.len()).any(|i| p.suffix_from(i).prefix(s.len()) == *s)
}

fn random_seq(rng: &mut impl Rng, lo: usize, hi: usize) -> BinSeq {
    let len = rng.gen_range(lo..=hi);
    BinSeq::from_value(rng.gen::<u64>() & ((1u64 << len) - 1), len).expect("short")
}

/// An open dense set on the single Cohen poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OneDense {
    /// Conditions below `r` or incompatible with it.
    BelowOrIncompatible { r: BinSeq },
    MinLen { k: usize },
    /// Conditions with `s` as a contiguous substring.
    Contains { s: BinSeq },
}

impl OneDense {
    pub fn random(rng: &mut impl Rng) -> Self {
        match rng.gen_range(0..3) {
            0 => OneDense::BelowOrIncompatible { r: random_seq(rng, 1, 4) },
            1 => OneDense::MinLen { k: rng.gen_range(1..=5) },
            _ => OneDense::Contains { s: random_seq(rng, 1, 2) },
        }
    }

    pub fn random_family(rng: &mut impl Rng, n: usize) -> Vec<Self> {
        (0..n).map(|_| Self::random(rng)).collect()
    }

    pub fn label(&self) -> String {
        match self {
            OneDense::BelowOrIncompatible { r } => format!("below_or_incompatible({r})"),
            OneDense::MinLen { k } => format!("min_len({k})"),
            OneDense::Contains { s } => format!("contains({s})"),
        }
    }

    pub fn contains(&self, p: &BinSeq) -> bool {
        match self {
            OneDense::BelowOrIncompatible { r } => p.extends(r) || !p.compatible(r),
            OneDense::MinLen { k } => p.len() >= *k,
            OneDense::Contains { s } => has_substring(p, s),
        }
    }

    pub fn dense_set(&self) -> DenseSet<BinSeq> {
        let me = self.clone();
        DenseSet::open_predicate(self.label(), move |p| me.contains(p))
    }
}

/// An open dense set on the many-coordinate Cohen poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManyDense {
    BelowOrIncompatible { r: ManyCondition },
    MinLen { coord: u32, k: usize },
    Contains { coord: u32, s: BinSeq },
}

impl ManyDense {
    pub fn random(rng: &mut impl Rng, lambda: u32) -> Self {
        match rng.gen_range(0..3) {
            0 => {
                let mut r = ManyCondition::new();
                let wanted = rng.gen_range(1..=lambda.min(2));
                while r.len() < wanted as usize {
                    r.set(rng.gen_range(0..lambda), random_seq(rng, 1, 3));
                }
                ManyDense::BelowOrIncompatible { r }
            }
            1 => ManyDense::MinLen {
                coord: rng.gen_range(0..lambda),
                k: rng.gen_range(1..=4),
            },
            _ => ManyDense::Contains {
                coord: rng.gen_range(0..lambda),
                s: random_seq(rng, 1, 2),
            },
        }
    }

    pub fn random_family(rng: &mut impl Rng, lambda: u32, n: usize) -> Vec<Self> {
        (0..n).map(|_| Self::random(rng, lambda)).collect()
    }

    pub fn label(&self) -> String {
        match self {
            ManyDense::BelowOrIncompatible { r } => format!("below_or_incompatible({r})"),
            ManyDense::MinLen { coord, k } => format!("min_len({coord}, {k})"),
            ManyDense::Contains { coord, s } => format!("contains({coord}, {s})"),
        }
    }

    pub fn contains(&self, p: &ManyCondition) -> bool {
        match self {
            ManyDense::BelowOrIncompatible { r } => p.extends(r) || !p.compatible(r),
            ManyDense::MinLen { coord, k } => p.get(*coord).len() >= *k,
            ManyDense::Contains { coord, s } => has_substring(&p.get(*coord), s),
        }
    }

    pub fn dense_set(&self) -> DenseSet<ManyCondition> {
        let me = self.clone();
        DenseSet::open_predicate(self.label(), move |p| me.contains(p))
    }
}
