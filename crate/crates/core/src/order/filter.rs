use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{DenseSet, Poset};
use crate::error::{Error, Result};

/// A set of conditions, meant to be upward closed and directed. The
/// invariants are checked by [`Filter::check`] rather than enforced on
/// construction so that malformed inputs can be reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Filter<C: Ord> {
    elements: BTreeSet<C>,
}

/// Outcome of checking the filter invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FilterCheck<C> {
    Ok,
    Empty,
    OutsideCarrier { element: C },
    NotUpwardClosed { element: C, missing: C },
    NotDirected { left: C, right: C },
}

impl<C: Ord> FilterCheck<C> {
    pub fn is_ok(&self) -> bool {
        matches!(self, FilterCheck::Ok)
    }
}

impl<C: Clone + Ord> Filter<C> {
    pub fn from_elements(elements: impl IntoIterator<Item = C>) -> Self {
        Filter {
            elements: elements.into_iter().collect(),
        }
    }

    /// The upward closure of `generators` in `poset`.
    pub fn upward_closure<P: Poset<Cond = C>>(poset: &P, generators: impl IntoIterator<Item = C>) -> Self {
        let mut elements = BTreeSet::new();
        for g in generators {
            if elements.contains(&g) {
                continue;
            }
            elements.extend(poset.weaker(&g));
        }
        Filter { elements }
    }

    pub fn principal<P: Poset<Cond = C>>(poset: &P, c: &C) -> Self {
        Filter {
            elements: poset.weaker(c).into_iter().collect(),
        }
    }

    pub fn contains(&self, c: &C) -> bool {
        self.elements.contains(c)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &C> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &BTreeSet<C> {
        &self.elements
    }

    pub fn meets(&self, set: &DenseSet<C>) -> bool {
        self.elements.iter().any(|c| set.contains(c))
    }

    /// An element below every other element, if the filter has one.
    pub fn least<P: Poset<Cond = C>>(&self, poset: &P) -> Option<&C> {
        self.elements
            .iter()
            .find(|&c| self.elements.iter().all(|d| poset.leq(c, d)))
    }

    /// Check carrier membership, upward closure and directedness.
    pub fn check<P: Poset<Cond = C>>(&self, poset: &P) -> FilterCheck<C> {
        if self.elements.is_empty() {
            return FilterCheck::Empty;
        }
        for e in &self.elements {
            if !poset.contains(e) {
                return FilterCheck::OutsideCarrier { element: e.clone() };
            }
            if let Some(missing) = poset.weaker(e).into_iter().find(|w| !self.contains(w)) {
                return FilterCheck::NotUpwardClosed {
                    element: e.clone(),
                    missing,
                };
            }
        }
        if self.least(poset).is_some() {
            return FilterCheck::Ok;
        }
        let elems: Vec<&C> = self.elements.iter().collect();
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i + 1..] {
                let joined = elems.iter().any(|r| poset.leq(r, a) && poset.leq(r, b));
                if !joined {
                    return FilterCheck::NotDirected {
                        left: (*a).clone(),
                        right: (*b).clone(),
                    };
                }
            }
        }
        FilterCheck::Ok
    }
}

/// The descending chain behind [`build_generic`]: `start` followed by, for
/// each dense set in order, the least extension of the previous condition
/// (by rank, then `Ord`) that belongs to it.
pub fn descend<P: Poset>(
    poset: &P,
    dense: &[DenseSet<P::Cond>],
    start: &P::Cond,
    budget: usize,
) -> Result<Vec<P::Cond>> {
    if !poset.contains(start) {
        return Err(Error::InvalidInput(format!("start {start:?} is not in the carrier")));
    }
    let mut chain = vec![start.clone()];
    let mut work = 0usize;
    for (index, set) in dense.iter().enumerate() {
        let current = chain.last().expect("chain is never empty").clone();
        let depth = poset.max_rank().saturating_sub(poset.rank(&current));
        let mut next = None;
        'search: for k in 0..=depth {
            if work + poset.search_count_hint(&current, k) > budget {
                return Err(Error::bound("generic filter search", budget));
            }
            for e in poset.search_extensions_at(&current, k) {
                work += 1;
                if work > budget {
                    return Err(Error::bound("generic filter search", budget));
                }
                if set.contains(&e) {
                    next = Some(e);
                    break 'search;
                }
            }
        }
        chain.push(next.ok_or(Error::NotDense { index })?);
    }
    Ok(chain)
}

/// Meet each dense set in turn along a descending chain from `start` and
/// return the upward closure of the chain.
pub fn build_generic<P: Poset>(
    poset: &P,
    dense: &[DenseSet<P::Cond>],
    start: &P::Cond,
    budget: usize,
) -> Result<Filter<P::Cond>> {
    let chain = descend(poset, dense, start, budget)?;
    let last = chain.last().expect("chain is never empty");
    Ok(Filter::principal(poset, last))
}

pub fn is_generic<C: Clone + Ord>(filter: &Filter<C>, dense: &[DenseSet<C>]) -> bool {
    dense.iter().all(|d| filter.meets(d))
}
