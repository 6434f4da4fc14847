//! Term forcing for the single Cohen poset over a small finite poset `P`.
//!
//! A term condition is a finite sequence of antichains of `P`, read as a
//! nice name for a binary sequence. Two antichains are equivalent when they
//! cover the same minimal elements of `P`; term conditions are preordered by
//! end-extension up to that equivalence.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BinSeq;
use crate::cohen::{BlockAligned, CohenOne};
use crate::error::{Error, Result};
use crate::order::{DenseSet, Filter, FinitePoset, Poset, Projection};

/// A subset of a finite carrier as a bit mask (bit `i` = element `i`).
/// Serialized as a sorted array of indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Antichain(pub u32);

impl Antichain {
    pub const EMPTY: Antichain = Antichain(0);

    pub fn singleton(i: usize) -> Self {
        Antichain(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Antichain(indices.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 >> i & 1 == 1)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl Serialize for Antichain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.indices())
    }
}

impl<'de> Deserialize<'de> for Antichain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(bad) = v.iter().find(|&&i| i >= 32) {
            return Err(serde::de::Error::custom(format!("index {bad} out of range")));
        }
        Ok(Antichain::from_indices(v))
    }
}

/// A sequence of antichains.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TermCondition(pub Vec<Antichain>);

impl TermCondition {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for TermCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// Minimal elements of `P` lying below some member of `a`, as a mask.
pub fn atom_coverage(p: &FinitePoset, a: Antichain) -> u32 {
    p.atoms()
        .into_iter()
        .filter(|&m| a.indices().any(|x| p.le(m, x)))
        .fold(0, |mask, m| mask | 1 << m)
}

pub fn equiv(p: &FinitePoset, a: Antichain, b: Antichain) -> bool {
    atom_coverage(p, a) == atom_coverage(p, b)
}

/// `p <= q`: `p` is at least as long and agrees with `q` up to equivalence.
pub fn term_leq(poset: &FinitePoset, p: &TermCondition, q: &TermCondition) -> bool {
    p.len() >= q.len() && q.0.iter().zip(&p.0).all(|(&a, &b)| equiv(poset, a, b))
}

/// A two-valued labelling of the antichains of `P`, onto and constant on
/// equivalence classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntichainLabeler {
    labels: BTreeMap<Antichain, bool>,
    canonical: [Antichain; 2],
}

impl AntichainLabeler {
    pub fn from_fn(p: &FinitePoset, f: impl Fn(Antichain) -> bool) -> Result<Self> {
        let labels: BTreeMap<Antichain, bool> = p
            .antichains()
            .into_iter()
            .map(|m| (Antichain(m), f(Antichain(m))))
            .collect();
        let mut by_class: BTreeMap<u32, bool> = BTreeMap::new();
        for (&a, &l) in &labels {
            if let Some(prev) = by_class.insert(atom_coverage(p, a), l) {
                if prev != l {
                    return Err(Error::InvalidInput(format!(
                        "labeler is not constant on the class of {a:?}"
                    )));
                }
            }
        }
        let top = Antichain::singleton(p.top_index());
        let pick = |bit: bool, preferred: Antichain| -> Result<Antichain> {
            if labels.get(&preferred) == Some(&bit) {
                return Ok(preferred);
            }
            labels
                .iter()
                .find(|&(_, &l)| l == bit)
                .map(|(&a, _)| a)
                .ok_or_else(|| Error::InvalidInput(format!("labeler never takes the value {}", bit as u8)))
        };
        let canonical = [pick(false, Antichain::EMPTY)?, pick(true, top)?];
        Ok(AntichainLabeler { labels, canonical })
    }

    pub fn label(&self, a: Antichain) -> bool {
        self.labels.get(&a).copied().unwrap_or(false)
    }

    /// The antichain used for `bit` by lifts: `∅` for 0 and `{top}` for 1
    /// when the labels allow, otherwise the least antichain with that label.
    pub fn canonical(&self, bit: bool) -> Antichain {
        self.canonical[bit as usize]
    }
}

/// Label 1 exactly for antichains covering every minimal element.
pub fn default_labeler(p: &FinitePoset) -> AntichainLabeler {
    let all = p.atom_mask();
    AntichainLabeler::from_fn(p, |a| atom_coverage(p, a) == all).expect("default labeler is valid")
}

pub fn term_to_cohen(labeler: &AntichainLabeler, q: &TermCondition) -> BinSeq {
    BinSeq::from_bits(&q.0.iter().map(|&a| labeler.label(a)).collect::<Vec<_>>())
        .expect("term conditions are shorter than the sequence capacity")
}

/// Extend `p` by canonical antichains so that its label sequence becomes `q`.
pub fn lift_term(labeler: &AntichainLabeler, p: &TermCondition, q: &BinSeq) -> Result<TermCondition> {
    if !q.extends(&term_to_cohen(labeler, p)) {
        return Err(Error::NotBelow);
    }
    let mut out = p.clone();
    out.0.extend(q.iter().skip(p.len()).map(|b| labeler.canonical(b)));
    Ok(out)
}

/// Decode `δ`-bit blocks as subsets; non-antichains become `∅`.
pub fn cohen_to_term(poset: &FinitePoset, p: &BinSeq) -> Result<TermCondition> {
    let delta = poset.size();
    if !p.len().is_multiple_of(delta) {
        return Err(Error::LengthNotMultiple { len: p.len(), block: delta });
    }
    let entries = (0..p.len() / delta)
        .map(|beta| {
            let set = Antichain::from_indices(
                (0..delta).filter(|&j| p.get(beta * delta + j) == Some(true)),
            );
            if poset.is_antichain(set.0) {
                set
            } else {
                Antichain::EMPTY
            }
        })
        .collect();
    Ok(TermCondition(entries))
}

fn code_antichain(poset: &FinitePoset, a: Antichain) -> BinSeq {
    BinSeq::from_bits(&(0..poset.size()).map(|j| a.contains(j)).collect::<Vec<_>>())
        .expect("carrier fits")
}

/// The sequence whose bit `β` records whether `g` meets `q(β)`.
pub fn eval_name(q: &TermCondition, g: &Filter<usize>) -> BinSeq {
    BinSeq::from_bits(
        &q.0.iter()
            .map(|a| a.indices().any(|i| g.contains(&i)))
            .collect::<Vec<_>>(),
    )
    .expect("term conditions are shorter than the sequence capacity")
}

/// The upward closure of the evaluations of `h` by `g`.
pub fn term_transfer(cohen: &CohenOne, h: &Filter<TermCondition>, g: &Filter<usize>) -> Filter<BinSeq> {
    Filter::upward_closure(cohen, h.iter().map(|q| eval_name(q, g)))
}

/// The set of term conditions every atom-generated evaluation of which
/// lies in `set`.
pub fn translate_dense(term: &TermPoset, set: &DenseSet<BinSeq>) -> DenseSet<TermCondition> {
    let poset = term.poset.clone();
    let atoms = poset.atoms();
    let set = set.clone();
    let label = format!("term({})", set.label());
    DenseSet::predicate(label, move |q: &TermCondition| {
        atoms.iter().all(|&m| {
            let bits: Vec<bool> = q.0.iter().map(|a| a.indices().any(|x| poset.le(m, x))).collect();
            BinSeq::from_bits(&bits).is_ok_and(|s| set.contains(&s))
        })
    })
}

/// Every partial order on `{0..n-1}` with a maximum, for `1 <= n <= max_size`,
/// by raw enumeration of relations.
pub fn catalog(max_size: usize) -> Vec<FinitePoset> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        for bits in 0u64..1 << pairs.len() {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    leq[a * n + b] = true;
                }
            }
            let Some(top) = (0..n).find(|&t| (0..n).all(|x| leq[x * n + t])) else {
                continue;
            };
            if let Ok(p) = FinitePoset::from_matrix(n, leq, top) {
                out.push(p);
            }
        }
    }
    out
}

/// Term conditions of length `< max_len` under [`term_leq`]. This is a
/// preorder: equivalent antichains make distinct but equivalent conditions.
#[derive(Clone, Debug)]
pub struct TermPoset {
    pub poset: FinitePoset,
    pub max_len: usize,
    antichains: Vec<Antichain>,
    classes: BTreeMap<u32, Vec<Antichain>>,
}

impl TermPoset {
    pub fn new(poset: FinitePoset, max_len: usize) -> Self {
        assert!((1..=BinSeq::CAPACITY + 1).contains(&max_len));
        let antichains: Vec<Antichain> = poset.antichains().into_iter().map(Antichain).collect();
        let mut classes: BTreeMap<u32, Vec<Antichain>> = BTreeMap::new();
        for &a in &antichains {
            classes.entry(atom_coverage(&poset, a)).or_default().push(a);
        }
        TermPoset {
            poset,
            max_len,
            antichains,
            classes,
        }
    }

    pub fn antichains(&self) -> &[Antichain] {
        &self.antichains
    }

    fn class_of(&self, a: Antichain) -> &[Antichain] {
        &self.classes[&atom_coverage(&self.poset, a)]
    }

    fn variants(&self, c: &TermCondition, upto: usize) -> Vec<Vec<Antichain>> {
        let mut out = vec![Vec::new()];
        for &a in &c.0[..upto] {
            let class = self.class_of(a);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    class.iter().map(move |&b| {
                        let mut v = prefix.clone();
                        v.push(b);
                        v
                    })
                })
                .collect();
        }
        out
    }

    fn tails(&self, extra: usize) -> Vec<Vec<Antichain>> {
        let mut out = vec![Vec::new()];
        for _ in 0..extra {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    self.antichains.iter().map(move |&b| {
                        let mut v = prefix.clone();
                        v.push(b);
                        v
                    })
                })
                .collect();
        }
        out
    }

    fn class_product(&self, c: &TermCondition) -> usize {
        c.0.iter()
            .map(|&a| self.class_of(a).len())
            .fold(1usize, |acc, n| acc.saturating_mul(n))
    }
}

impl Poset for TermPoset {
    type Cond = TermCondition;

    fn top(&self) -> TermCondition {
        TermCondition::default()
    }

    fn leq(&self, p: &TermCondition, q: &TermCondition) -> bool {
        term_leq(&self.poset, p, q)
    }

    fn contains(&self, c: &TermCondition) -> bool {
        c.len() < self.max_len && c.0.iter().all(|a| a.0 >> self.poset.size() == 0 && self.poset.is_antichain(a.0))
    }

    fn rank(&self, c: &TermCondition) -> usize {
        c.len()
    }

    fn max_rank(&self) -> usize {
        self.max_len - 1
    }

    fn extensions_at(&self, c: &TermCondition, extra: usize) -> Vec<TermCondition> {
        if c.len() + extra >= self.max_len {
            return Vec::new();
        }
        let tails = self.tails(extra);
        let mut out: Vec<TermCondition> = self
            .variants(c, c.len())
            .into_iter()
            .flat_map(|head| {
                tails.iter().map(move |t| {
                    let mut v = head.clone();
                    v.extend(t);
                    TermCondition(v)
                })
            })
            .collect();
        out.sort();
        out
    }

    fn extension_count_hint(&self, c: &TermCondition, extra: usize) -> usize {
        self.class_product(c).saturating_mul(self.search_count_hint(c, extra))
    }

    /// End-extensions only: every extension is equivalent to one of them.
    fn search_extensions_at(&self, c: &TermCondition, extra: usize) -> Vec<TermCondition> {
        if c.len() + extra >= self.max_len {
            return Vec::new();
        }
        self.tails(extra)
            .into_iter()
            .map(|t| {
                let mut v = c.0.clone();
                v.extend(t);
                TermCondition(v)
            })
            .collect()
    }

    fn search_count_hint(&self, _c: &TermCondition, extra: usize) -> usize {
        (0..extra).fold(1usize, |acc, _| acc.saturating_mul(self.antichains.len()))
    }

    fn weaker(&self, c: &TermCondition) -> Vec<TermCondition> {
        let mut out: Vec<TermCondition> = (0..=c.len())
            .flat_map(|l| self.variants(c, l))
            .map(TermCondition)
            .collect();
        out.sort();
        out
    }
}

/// Label sequences of term conditions, as a projection onto the Cohen poset.
#[derive(Clone, Debug)]
pub struct TermToCohen {
    pub labeler: AntichainLabeler,
    domain: TermPoset,
    codomain: CohenOne,
}

impl TermToCohen {
    pub fn new(poset: FinitePoset, labeler: AntichainLabeler, max_len: usize) -> Self {
        TermToCohen {
            labeler,
            domain: TermPoset::new(poset, max_len),
            codomain: CohenOne::new(max_len),
        }
    }
}

impl Projection for TermToCohen {
    type Domain = TermPoset;
    type Codomain = CohenOne;

    fn domain(&self) -> &TermPoset {
        &self.domain
    }

    fn codomain(&self) -> &CohenOne {
        &self.codomain
    }

    fn apply(&self, p: &TermCondition) -> Result<BinSeq> {
        Ok(term_to_cohen(&self.labeler, p))
    }

    fn lift(&self, p: &TermCondition, q: &BinSeq) -> Option<Result<TermCondition>> {
        Some(lift_term(&self.labeler, p, q))
    }

    fn exact_lift(&self) -> bool {
        true
    }
}

/// Block decoding from the multiple-of-`δ` sub-poset onto term conditions.
#[derive(Clone, Debug)]
pub struct CohenToTerm {
    domain: BlockAligned,
    codomain: TermPoset,
}

impl CohenToTerm {
    /// Domain strings hold up to `max_blocks` blocks; the codomain allows
    /// `extra_len` more entries than that for lifting targets.
    pub fn new(poset: FinitePoset, max_blocks: usize, extra_len: usize) -> Self {
        let delta = poset.size();
        CohenToTerm {
            domain: BlockAligned::new(delta, delta * (max_blocks + extra_len) + 1),
            codomain: TermPoset::new(poset, max_blocks + extra_len + 1),
        }
    }
}

impl Projection for CohenToTerm {
    type Domain = BlockAligned;
    type Codomain = TermPoset;

    fn domain(&self) -> &BlockAligned {
        &self.domain
    }

    fn codomain(&self) -> &TermPoset {
        &self.codomain
    }

    fn apply(&self, p: &BinSeq) -> Result<TermCondition> {
        cohen_to_term(&self.codomain.poset, p)
    }

    /// Append the codes of the entries of `q` past the image of `p`.
    fn lift(&self, p: &BinSeq, q: &TermCondition) -> Option<Result<BinSeq>> {
        let poset = &self.codomain.poset;
        let lifted = cohen_to_term(poset, p).and_then(|image| {
            if !term_leq(poset, q, &image) {
                return Err(Error::NotBelow);
            }
            q.0[image.len()..].iter().try_fold(*p, |acc, &a| acc.concat(&code_antichain(poset, a)))
        });
        Some(lifted)
    }

    fn exact_lift(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::order::{verify_projection, VerifyBounds};

    fn ab() -> FinitePoset {
        FinitePoset::flat(2).unwrap()
    }

    fn t(entries: &[&[usize]]) -> TermCondition {
        TermCondition(entries.iter().map(|e| Antichain::from_indices(e.iter().copied())).collect())
    }

    const TOP: &[usize] = &[0];
    const A: &[usize] = &[1];
    const B: &[usize] = &[2];
    const AB: &[usize] = &[1, 2];

    #[test]
    fn coverage_and_equivalence() {
        let p = ab();
        assert_eq!(atom_coverage(&p, Antichain::EMPTY), 0);
        assert_eq!(atom_coverage(&p, Antichain::singleton(0)), 0b110);
        assert_eq!(atom_coverage(&p, Antichain::singleton(1)), 0b010);
        assert!(equiv(&p, Antichain::singleton(0), Antichain::from_indices([1, 2])));
        assert!(!equiv(&p, Antichain::singleton(1), Antichain::singleton(2)));
    }

    #[test]
    fn term_order_examples() {
        let p = ab();
        let q = t(&[TOP, A]);
        assert!(term_leq(&p, &q, &q));
        assert!(term_leq(&p, &t(&[TOP, A]), &t(&[AB])));
        assert!(!term_leq(&p, &t(&[A]), &t(&[B])));
    }

    #[test]
    fn labels_and_lifts() {
        let p = ab();
        let d = default_labeler(&p);
        assert!(!d.label(Antichain::EMPTY));
        assert!(d.label(Antichain::singleton(0)));
        assert!(!d.label(Antichain::singleton(1)));
        assert!(d.label(Antichain::from_indices([1, 2])));
        assert_eq!(term_to_cohen(&d, &t(&[])), bs(""));
        assert_eq!(term_to_cohen(&d, &t(&[TOP, A])), bs("10"));
        assert_eq!(term_to_cohen(&d, &t(&[&[]])), bs("0"));
        assert_eq!(lift_term(&d, &t(&[]), &bs("")).unwrap(), t(&[]));
        assert_eq!(lift_term(&d, &t(&[]), &bs("10")).unwrap(), t(&[TOP, &[]]));
        assert_eq!(lift_term(&d, &t(&[AB]), &bs("11")).unwrap(), t(&[AB, TOP]));
        assert_eq!(lift_term(&d, &t(&[AB]), &bs("0")), Err(Error::NotBelow));
    }

    #[test]
    fn labeler_validation() {
        let p = ab();
        assert!(AntichainLabeler::from_fn(&p, |_| true).is_err());
        assert!(AntichainLabeler::from_fn(&p, |a| a == Antichain::singleton(0)).is_err());
        let inverted = AntichainLabeler::from_fn(&p, |a| a == Antichain::EMPTY).unwrap();
        assert_eq!(inverted.canonical(true), Antichain::EMPTY);
        assert_eq!(inverted.canonical(false), Antichain::singleton(0));
    }

    #[test]
    fn block_decoding() {
        let p = ab();
        assert_eq!(cohen_to_term(&p, &bs("")).unwrap(), t(&[]));
        assert_eq!(cohen_to_term(&p, &bs("011")).unwrap(), t(&[AB]));
        assert_eq!(cohen_to_term(&p, &bs("111")).unwrap(), t(&[&[]]));
        assert_eq!(
            cohen_to_term(&p, &bs("0110")),
            Err(Error::LengthNotMultiple { len: 4, block: 3 })
        );
    }

    #[test]
    fn name_evaluation_and_transfer() {
        let p = ab();
        let q = t(&[A, AB]);
        let ga = Filter::principal(&p, &1);
        let gb = Filter::principal(&p, &2);
        assert_eq!(eval_name(&t(&[]), &ga), bs(""));
        assert_eq!(eval_name(&q, &ga), bs("11"));
        assert_eq!(eval_name(&q, &gb), bs("01"));
        let term = TermPoset::new(p.clone(), 4);
        let cohen = CohenOne::new(4);
        let h = Filter::principal(&term, &q);
        assert_eq!(term_transfer(&cohen, &h, &ga), Filter::principal(&cohen, &bs("11")));
        assert_eq!(term_transfer(&cohen, &h, &gb), Filter::principal(&cohen, &bs("01")));
        let trivial = Filter::principal(&term, &t(&[]));
        assert_eq!(term_transfer(&cohen, &trivial, &ga), Filter::from_elements([bs("")]));
    }

    #[test]
    fn catalog_counts() {
        // labelled posets with a maximum: n times the labelled posets on n - 1 points
        let counts: Vec<usize> = (1..=4)
            .map(|n| catalog(n).len() - if n > 1 { catalog(n - 1).len() } else { 0 })
            .collect();
        assert_eq!(counts, vec![1, 2, 9, 76]);
    }

    #[test]
    fn both_projections_on_the_flat_poset() {
        let p = ab();
        let up = TermToCohen::new(p.clone(), default_labeler(&p), 6);
        let r = verify_projection(&up, &VerifyBounds::new(2, 2)).unwrap();
        assert!(r.holds(), "{:?}", r.violations.first());
        let down = CohenToTerm::new(p, 2, 1);
        let r = verify_projection(&down, &VerifyBounds::new(6, 1)).unwrap();
        assert!(r.holds(), "{:?}", r.violations.first());
    }

    #[test]
    fn preorder_weaker_includes_equivalents() {
        let term = TermPoset::new(ab(), 4);
        let w = term.weaker(&t(&[TOP]));
        assert_eq!(w, vec![t(&[]), t(&[TOP]), t(&[AB])]);
        let ext = term.extensions_at(&t(&[TOP]), 0);
        assert_eq!(ext, vec![t(&[TOP]), t(&[AB])]);
        assert_eq!(term.search_extensions_at(&t(&[TOP]), 0), vec![t(&[TOP])]);
    }
}
