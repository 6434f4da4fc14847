use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::Poset;
use crate::error::{Error, Result};

type Pred<C> = Arc<dyn Fn(&C) -> bool + Send + Sync>;

#[derive(Clone)]
enum Membership<C> {
    Members(BTreeSet<C>),
    Predicate(Pred<C>),
}

/// A set of conditions that a generic filter is asked to meet.
///
/// Density is a property relative to a poset and is checked with
/// [`check_density`], never assumed by the constructors. A set flagged *open*
/// is downward closed, which lets [`super::project_dense`] test membership of
/// the image directly instead of scanning its upward cone.
#[derive(Clone)]
pub struct DenseSet<C> {
    label: String,
    membership: Membership<C>,
    open: bool,
}

impl<C: Ord> DenseSet<C> {
    pub fn explicit(label: impl Into<String>, members: impl IntoIterator<Item = C>) -> Self {
        DenseSet {
            label: label.into(),
            membership: Membership::Members(members.into_iter().collect()),
            open: false,
        }
    }

    pub fn predicate(label: impl Into<String>, f: impl Fn(&C) -> bool + Send + Sync + 'static) -> Self {
        DenseSet {
            label: label.into(),
            membership: Membership::Predicate(Arc::new(f)),
            open: false,
        }
    }

    /// A predicate the caller asserts is downward closed.
    pub fn open_predicate(
        label: impl Into<String>,
        f: impl Fn(&C) -> bool + Send + Sync + 'static,
    ) -> Self {
        DenseSet {
            open: true,
            ..Self::predicate(label, f)
        }
    }

    pub fn contains(&self, c: &C) -> bool {
        match &self.membership {
            Membership::Members(m) => m.contains(c),
            Membership::Predicate(f) => f(c),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_open(&self) -> bool {
        self.open
    }

    pub fn members(&self) -> Option<&BTreeSet<C>> {
        match &self.membership {
            Membership::Members(m) => Some(m),
            Membership::Predicate(_) => None,
        }
    }
}

impl<C> fmt::Debug for DenseSet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseSet")
            .field("label", &self.label)
            .field("open", &self.open)
            .finish_non_exhaustive()
    }
}

/// Exhaustive density check. For every carrier member `p` of rank
/// `<= max_rank`, look for a member of `set` among the extensions of `p` at
/// most `depth` ranks deeper. Returns the first `p` with no such extension.
pub fn check_density<P: Poset>(
    poset: &P,
    set: &DenseSet<P::Cond>,
    max_rank: usize,
    depth: usize,
    budget: usize,
) -> Result<Option<P::Cond>> {
    let mut work = 0usize;
    for p in poset.enumerate(max_rank, budget)? {
        let mut found = false;
        'search: for k in 0..=depth {
            if work + poset.extension_count_hint(&p, k) > budget {
                return Err(Error::bound("density check", budget));
            }
            for e in poset.extensions_at(&p, k) {
                work += 1;
                if work > budget {
                    return Err(Error::bound("density check", budget));
                }
                if set.contains(&e) {
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FinitePoset;

    #[test]
    fn density_on_a_chain() {
        let chain = FinitePoset::chain(3).unwrap();
        let bottom = DenseSet::explicit("bottom", [2usize]);
        assert_eq!(check_density(&chain, &bottom, 10, 10, 1000).unwrap(), None);
        let middle = DenseSet::explicit("middle", [1usize]);
        assert_eq!(check_density(&chain, &middle, 10, 10, 1000).unwrap(), Some(2));
    }

    #[test]
    fn predicate_membership() {
        let d: DenseSet<usize> = DenseSet::open_predicate("even", |x| x % 2 == 0);
        assert!(d.contains(&4));
        assert!(!d.contains(&3));
        assert!(d.is_open());
        assert!(d.members().is_none());
    }
}
