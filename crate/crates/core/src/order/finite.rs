use serde::{Deserialize, Serialize};

use super::Poset;
use crate::error::{Error, Result};

/// A partial order with a maximum on the carrier `0..size`, stored as a
/// dense relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    size: usize,
    // leq[a * size + b] <=> a <= b
    leq: Vec<bool>,
    top: usize,
    rank: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// Wire shape of a finite poset: either labelled
/// `{"carrier": [...], "leq_pairs": [[a, b], ...], "top": t}` or indexed
/// `{"size": n, "leq_pairs": [[i, j], ...], "top": i}`. Pairs `[a, b]` read
/// `a <= b`; reflexive and transitive closure is taken on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FinitePosetSpec {
    Labelled {
        carrier: Vec<String>,
        leq_pairs: Vec<[String; 2]>,
        top: String,
    },
    Indexed {
        size: usize,
        leq_pairs: Vec<[usize; 2]>,
        top: usize,
    },
}

impl FinitePoset {
    /// Largest carrier accepted; antichains are handled as `u32` masks.
    pub const MAX_SIZE: usize = 24;

    /// Build from a relation matrix that must already be a partial order with
    /// maximum `top`.
    pub fn from_matrix(size: usize, leq: Vec<bool>, top: usize) -> Result<Self> {
        if size == 0 || size > Self::MAX_SIZE {
            return Err(Error::InvalidPoset(format!(
                "size must be in 1..={}, got {size}",
                Self::MAX_SIZE
            )));
        }
        if leq.len() != size * size {
            return Err(Error::InvalidPoset("relation matrix has the wrong shape".into()));
        }
        if top >= size {
            return Err(Error::InvalidPoset(format!("top {top} outside carrier")));
        }
        let at = |a: usize, b: usize| leq[a * size + b];
        for a in 0..size {
            if !at(a, a) {
                return Err(Error::InvalidPoset(format!("not reflexive at {a}")));
            }
            if !at(a, top) {
                return Err(Error::InvalidPoset(format!("{a} is not below top {top}")));
            }
            for b in 0..size {
                if a != b && at(a, b) && at(b, a) {
                    return Err(Error::InvalidPoset(format!("not antisymmetric at {a}, {b}")));
                }
                for c in 0..size {
                    if at(a, b) && at(b, c) && !at(a, c) {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive at {a}, {b}, {c}"
                        )));
                    }
                }
            }
        }
        let rank = (0..size)
            .map(|a| (0..size).filter(|&b| at(a, b)).count() - 1)
            .collect();
        Ok(FinitePoset {
            size,
            leq,
            top,
            rank,
            labels: None,
        })
    }

    /// Build from generating pairs `a <= b`, closing reflexively and transitively.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)], top: usize) -> Result<Self> {
        if size == 0 || size > Self::MAX_SIZE {
            return Err(Error::InvalidPoset(format!(
                "size must be in 1..={}, got {size}",
                Self::MAX_SIZE
            )));
        }
        let mut m = vec![false; size * size];
        for a in 0..size {
            m[a * size + a] = true;
        }
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(Error::InvalidPoset(format!("pair ({a}, {b}) outside carrier")));
            }
            m[a * size + b] = true;
        }
        // Warshall
        for k in 0..size {
            for a in 0..size {
                if m[a * size + k] {
                    for b in 0..size {
                        if m[k * size + b] {
                            m[a * size + b] = true;
                        }
                    }
                }
            }
        }
        Self::from_matrix(size, m, top)
    }

    pub fn from_spec(spec: &FinitePosetSpec) -> Result<Self> {
        match spec {
            FinitePosetSpec::Indexed {
                size,
                leq_pairs,
                top,
            } => {
                let pairs: Vec<_> = leq_pairs.iter().map(|[a, b]| (*a, *b)).collect();
                Self::from_pairs(*size, &pairs, *top)
            }
            FinitePosetSpec::Labelled {
                carrier,
                leq_pairs,
                top,
            } => {
                let index = |s: &String| {
                    carrier
                        .iter()
                        .position(|c| c == s)
                        .ok_or_else(|| Error::InvalidPoset(format!("unknown element {s:?}")))
                };
                for (i, c) in carrier.iter().enumerate() {
                    if carrier[..i].contains(c) {
                        return Err(Error::InvalidPoset(format!("duplicate element {c:?}")));
                    }
                }
                let pairs = leq_pairs
                    .iter()
                    .map(|[a, b]| Ok((index(a)?, index(b)?)))
                    .collect::<Result<Vec<_>>>()?;
                let mut p = Self::from_pairs(carrier.len(), &pairs, index(top)?)?;
                p.labels = Some(carrier.clone());
                Ok(p)
            }
        }
    }

    pub fn to_spec(&self) -> FinitePosetSpec {
        let pairs: Vec<[usize; 2]> = (0..self.size)
            .flat_map(|a| (0..self.size).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.le(a, b))
            .map(|(a, b)| [a, b])
            .collect();
        match &self.labels {
            None => FinitePosetSpec::Indexed {
                size: self.size,
                leq_pairs: pairs,
                top: self.top,
            },
            Some(labels) => FinitePosetSpec::Labelled {
                carrier: labels.clone(),
                leq_pairs: pairs
                    .iter()
                    .map(|[a, b]| [labels[*a].clone(), labels[*b].clone()])
                    .collect(),
                top: labels[self.top].clone(),
            },
        }
    }

    /// A chain `0 > 1 > ... > n-1` with `0` on top.
    pub fn chain(n: usize) -> Result<Self> {
        let pairs: Vec<_> = (1..n).map(|i| (i, i - 1)).collect();
        Self::from_pairs(n, &pairs, 0)
    }

    /// Top `0` over the pairwise incomparable atoms `1..=k`.
    pub fn flat(k: usize) -> Result<Self> {
        let pairs: Vec<_> = (1..=k).map(|i| (i, 0)).collect();
        Self::from_pairs(k + 1, &pairs, 0)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn top_index(&self) -> usize {
        self.top
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse().ok().filter(|&i| i < self.size),
        }
    }

    /// Elements with a common lower bound.
    pub fn compatible_elems(&self, a: usize, b: usize) -> bool {
        (0..self.size).any(|c| self.le(c, a) && self.le(c, b))
    }

    /// Minimal elements; the atoms of the forcing order.
    pub fn atoms(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&a| (0..self.size).all(|b| b == a || !self.le(b, a)))
            .collect()
    }

    pub fn atom_mask(&self) -> u32 {
        self.atoms().iter().fold(0, |m, &a| m | (1 << a))
    }

    pub fn up_set(&self, a: usize) -> Vec<usize> {
        (0..self.size).filter(|&b| self.le(a, b)).collect()
    }

    pub fn down_set(&self, a: usize) -> Vec<usize> {
        (0..self.size).filter(|&b| self.le(b, a)).collect()
    }

    /// Pairwise incompatibility of the members of `mask`.
    pub fn is_antichain(&self, mask: u32) -> bool {
        let members: Vec<usize> = (0..self.size).filter(|&i| mask >> i & 1 == 1).collect();
        if mask >> self.size != 0 {
            return false;
        }
        members
            .iter()
            .enumerate()
            .all(|(k, &a)| members[k + 1..].iter().all(|&b| !self.compatible_elems(a, b)))
    }

    /// Every antichain (including the empty one) as a bit mask, ascending.
    pub fn antichains(&self) -> Vec<u32> {
        (0..1u32 << self.size).filter(|&m| self.is_antichain(m)).collect()
    }
}

impl Poset for FinitePoset {
    type Cond = usize;

    fn top(&self) -> usize {
        self.top
    }

    fn leq(&self, p: &usize, q: &usize) -> bool {
        self.le(*p, *q)
    }

    fn contains(&self, c: &usize) -> bool {
        *c < self.size
    }

    fn rank(&self, c: &usize) -> usize {
        self.rank[*c]
    }

    fn max_rank(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    fn extensions_at(&self, c: &usize, extra: usize) -> Vec<usize> {
        let target = self.rank[*c] + extra;
        (0..self.size)
            .filter(|&e| self.le(e, *c) && self.rank[e] == target)
            .collect()
    }

    fn weaker(&self, c: &usize) -> Vec<usize> {
        self.up_set(*c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::check_order_axioms;

    fn diamond() -> FinitePoset {
        // 0 top, 1 and 2 middle, 3 bottom
        FinitePoset::from_pairs(4, &[(1, 0), (2, 0), (3, 1), (3, 2)], 0).unwrap()
    }

    #[test]
    fn closure_and_ranks() {
        let d = diamond();
        assert!(d.le(3, 0));
        assert_eq!(d.rank(&0), 0);
        assert_eq!(d.rank(&1), 1);
        assert_eq!(d.rank(&3), 3);
        assert_eq!(d.atoms(), vec![3]);
        assert_eq!(d.enumerate(10, 100).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(check_order_axioms(&d, 10, 100).unwrap(), None);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(FinitePoset::from_pairs(2, &[(0, 1), (1, 0)], 0).is_err());
        // 2 is not below 0
        assert!(FinitePoset::from_pairs(3, &[(1, 0)], 0).is_err());
        assert!(FinitePoset::from_pairs(0, &[], 0).is_err());
    }

    #[test]
    fn antichains_of_flat_poset() {
        let p = FinitePoset::flat(2).unwrap();
        // {}, {0}, {1}, {2}, {1,2}
        assert_eq!(p.antichains(), vec![0b000, 0b001, 0b010, 0b100, 0b110]);
        assert!(!p.is_antichain(0b011));
    }

    #[test]
    fn labelled_spec_round_trip() {
        let spec: FinitePosetSpec = serde_json::from_str(
            r#"{"carrier": ["1", "a", "b"], "leq_pairs": [["a", "1"], ["b", "1"]], "top": "1"}"#,
        )
        .unwrap();
        let p = FinitePoset::from_spec(&spec).unwrap();
        assert_eq!(p.atoms(), vec![1, 2]);
        assert_eq!(p.index_of("b"), Some(2));
        let again = FinitePoset::from_spec(&p.to_spec()).unwrap();
        assert_eq!(again, p);
    }
}
