//! End-to-end runs shared by the command line demos and the test suites.

use serde::Serialize;

use crate::bits::BinSeq;
use crate::cohen::CohenOne;
use crate::dictionary::Dictionary;
use crate::error::Result;
use crate::order::{build_generic, project_dense, pushforward, Filter, FinitePoset, Poset, Projection};
use crate::projections::OneProjection;
use crate::sampling::OneDense;
use crate::term::{term_transfer, translate_dense, TermCondition, TermPoset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushTrial {
    /// Strongest condition of the generic on the coded sub-poset.
    pub generic: BinSeq,
    /// Strongest condition of its pushforward.
    pub image: BinSeq,
    pub met: Vec<bool>,
}

impl PushTrial {
    pub fn all_met(&self) -> bool {
        self.met.iter().all(|&m| m)
    }
}

/// Build a generic on the coded sub-poset for the preimages of `family`
/// and push it forward along the dictionary projection.
pub fn split_pushforward(dict: &Dictionary, max_len: usize, family: &[OneDense], budget: usize) -> Result<PushTrial> {
    let map = OneProjection::new(dict.clone(), max_len, max_len);
    let targets: Vec<_> = family.iter().map(OneDense::dense_set).collect();
    let preimages: Vec<_> = targets.iter().map(|e| project_dense(&map, e)).collect();
    let g = build_generic(map.domain(), &preimages, &BinSeq::empty(), budget)?;
    let h = pushforward(&map, &g)?;
    Ok(PushTrial {
        generic: *g.least(map.domain()).expect("principal filter"),
        image: *h.least(map.codomain()).expect("principal filter"),
        met: targets.iter().map(|e| h.meets(e)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomTransfer {
    pub atom: usize,
    pub is_filter: bool,
    pub image: Option<BinSeq>,
    pub met: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferTrial {
    pub term_generic: TermCondition,
    pub atoms: Vec<AtomTransfer>,
}

impl TransferTrial {
    pub fn all_good(&self) -> bool {
        self.atoms.iter().all(|a| a.is_filter && a.met.iter().all(|&m| m))
    }
}

/// Build a term-forcing generic against the translations of `family` and
/// transfer it through every atom-generated filter of `poset`.
pub fn term_transfer_trial(
    poset: &FinitePoset,
    family: &[OneDense],
    max_len: usize,
    budget: usize,
) -> Result<TransferTrial> {
    let term = TermPoset::new(poset.clone(), max_len);
    let cohen = CohenOne::new(max_len);
    let targets: Vec<_> = family.iter().map(OneDense::dense_set).collect();
    let translated: Vec<_> = targets.iter().map(|d| translate_dense(&term, d)).collect();
    let h = build_generic(&term, &translated, &term.top(), budget)?;
    let term_generic = h.least(&term).expect("principal filter").clone();
    let atoms = poset
        .atoms()
        .into_iter()
        .map(|atom| {
            let g = Filter::principal(poset, &atom);
            let out = term_transfer(&cohen, &h, &g);
            AtomTransfer {
                atom,
                is_filter: out.check(&cohen).is_ok(),
                image: out.least(&cohen).copied(),
                met: targets.iter().map(|d| out.meets(d)).collect(),
            }
        })
        .collect();
    Ok(TransferTrial { term_generic, atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::DEFAULT_BUDGET;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pushforward_meets_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in Dictionary::builtins(9) {
            let family = OneDense::random_family(&mut rng, 8);
            let t = split_pushforward(&d, 32, &family, DEFAULT_BUDGET).unwrap();
            assert!(t.all_met(), "{t:?}");
        }
    }

    #[test]
    fn transfer_on_the_flat_poset() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let family = OneDense::random_family(&mut rng, 6);
        let t = term_transfer_trial(&FinitePoset::flat(3).unwrap(), &family, 16, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.atoms.len(), 3);
        assert!(t.all_good(), "{t:?}");
    }
}
