//! Partial orders over bounded carriers, dense sets, filters and projections.
//!
//! Conditions follow the forcing convention: `leq(p, q)` means `p` is
//! stronger than `q`. Every carrier is enumerable by *rank*, a poset-specific
//! size measure that strictly increases along strict extensions and is zero at
//! the top. The fixed enumeration order of a carrier is rank first, then the
//! condition's own `Ord`.

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

mod dense;
mod filter;
mod finite;
mod product;
mod projection;

pub use dense::{check_density, DenseSet};
pub use filter::{build_generic, descend, is_generic, FilterCheck, Filter};
pub use finite::{FinitePoset, FinitePosetSpec};
pub use product::Product;
pub use projection::{
    project_dense, pushforward, verify_projection, verify_projection_on, ConstantTop,
    FnProjection, Identity, Projection, VerificationReport, VerifyBounds, Violation,
};

/// Default cap on the number of conditions an enumeration may touch.
pub const DEFAULT_BUDGET: usize = 5_000_000;

pub trait Poset {
    type Cond: Clone + Ord + Hash + Debug + Serialize;

    fn top(&self) -> Self::Cond;

    /// `p <= q`: `p` is at least as strong as `q`.
    fn leq(&self, p: &Self::Cond, q: &Self::Cond) -> bool;

    /// Carrier membership (shape and truncation bound).
    fn contains(&self, c: &Self::Cond) -> bool;

    fn rank(&self, c: &Self::Cond) -> usize;

    /// No carrier member has rank above this.
    fn max_rank(&self) -> usize;

    /// Carrier members `e <= c` with `rank(e) == rank(c) + extra`, ascending.
    fn extensions_at(&self, c: &Self::Cond, extra: usize) -> Vec<Self::Cond>;

    /// Upper bound on `extensions_at(c, extra).len()`, used to refuse a
    /// level before materializing it. Zero means "small, no estimate".
    fn extension_count_hint(&self, _c: &Self::Cond, _extra: usize) -> usize {
        0
    }

    /// The extensions generic-filter search walks through. It may omit
    /// members equivalent to others it lists (only possible in a preorder)
    /// as long as the ordering by rank then `Ord` is kept.
    fn search_extensions_at(&self, c: &Self::Cond, extra: usize) -> Vec<Self::Cond> {
        self.extensions_at(c, extra)
    }

    fn search_count_hint(&self, c: &Self::Cond, extra: usize) -> usize {
        self.extension_count_hint(c, extra)
    }

    /// Carrier members `w` with `c <= w`, including `c` itself.
    fn weaker(&self, c: &Self::Cond) -> Vec<Self::Cond>;

    /// All carrier members of rank `<= max_rank`, in enumeration order.
    fn enumerate(&self, max_rank: usize, budget: usize) -> Result<Vec<Self::Cond>> {
        let top = self.top();
        let mut out = Vec::new();
        for k in 0..=max_rank.min(self.max_rank()) {
            if out.len() + self.extension_count_hint(&top, k) > budget {
                return Err(Error::bound("carrier enumeration", budget));
            }
            let level = self.extensions_at(&top, k);
            if out.len() + level.len() > budget {
                return Err(Error::bound("carrier enumeration", budget));
            }
            out.extend(level);
        }
        Ok(out)
    }

    /// Mutual extension. Coincides with equality on genuine partial orders.
    fn equivalent(&self, p: &Self::Cond, q: &Self::Cond) -> bool {
        self.leq(p, q) && self.leq(q, p)
    }

    fn compatible(&self, p: &Self::Cond, q: &Self::Cond) -> bool {
        self.leq(p, q) || self.leq(q, p) || self.common_extension(p, q).is_some()
    }

    /// Some carrier member below both, searched by rank.
    fn common_extension(&self, p: &Self::Cond, q: &Self::Cond) -> Option<Self::Cond> {
        let base = self.rank(p);
        (0..=self.max_rank().saturating_sub(base))
            .flat_map(|k| self.extensions_at(p, k))
            .find(|r| self.leq(r, q))
    }
}

/// Exhaustive check of the partial-order axioms on all members of rank `<= max_rank`.
/// Returns a description of the first failure.
pub fn check_order_axioms<P: Poset>(poset: &P, max_rank: usize, budget: usize) -> Result<Option<String>> {
    let all = poset.enumerate(max_rank, budget)?;
    let top = poset.top();
    for a in &all {
        if !poset.leq(a, a) {
            return Ok(Some(format!("not reflexive at {a:?}")));
        }
        if !poset.leq(a, &top) {
            return Ok(Some(format!("{a:?} is not below top")));
        }
        for b in &all {
            if !poset.leq(a, b) {
                continue;
            }
            if a != b && poset.leq(b, a) {
                return Ok(Some(format!("not antisymmetric at {a:?}, {b:?}")));
            }
            for c in &all {
                if poset.leq(b, c) && !poset.leq(a, c) {
                    return Ok(Some(format!("not transitive at {a:?}, {b:?}, {c:?}")));
                }
            }
        }
    }
    Ok(None)
}
