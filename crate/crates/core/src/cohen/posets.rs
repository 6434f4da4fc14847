//! Truncated Cohen posets and their dense coded sub-posets.
//!
//! `max_len` is the truncation: every value has length `< max_len`. Rank is
//! the (total) length.

use super::codec::{is_split_coded, marker_count};
use super::many::ManyCondition;
use crate::bits::BinSeq;
use crate::order::Poset;

fn suffixes(len: usize, last_one: bool) -> impl Iterator<Item = BinSeq> {
    BinSeq::all_of_len(len).filter(move |s| !last_one || len == 0 || s.last() == Some(true))
}

fn pow2(k: usize) -> usize {
    1usize.checked_shl(k as u32).unwrap_or(usize::MAX)
}

/// Binary sequences of length `< max_len` under end-extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohenOne {
    pub max_len: usize,
}

impl CohenOne {
    pub fn new(max_len: usize) -> Self {
        assert!((1..=BinSeq::CAPACITY + 1).contains(&max_len));
        CohenOne { max_len }
    }
}

impl Poset for CohenOne {
    type Cond = BinSeq;

    fn top(&self) -> BinSeq {
        BinSeq::empty()
    }

    fn leq(&self, p: &BinSeq, q: &BinSeq) -> bool {
        p.extends(q)
    }

    fn contains(&self, c: &BinSeq) -> bool {
        c.len() < self.max_len
    }

    fn rank(&self, c: &BinSeq) -> usize {
        c.len()
    }

    fn max_rank(&self) -> usize {
        self.max_len - 1
    }

    fn extensions_at(&self, c: &BinSeq, extra: usize) -> Vec<BinSeq> {
        if c.len() + extra >= self.max_len {
            return Vec::new();
        }
        suffixes(extra, false)
            .map(|s| c.concat(&s).expect("within capacity"))
            .collect()
    }

    fn extension_count_hint(&self, _c: &BinSeq, extra: usize) -> usize {
        pow2(extra)
    }

    fn weaker(&self, c: &BinSeq) -> Vec<BinSeq> {
        c.prefixes().collect()
    }
}

/// The dense sub-poset of coded conditions (odd length, final marker) plus
/// the empty sequence as its top.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitCodedOne {
    pub max_len: usize,
}

impl SplitCodedOne {
    pub fn new(max_len: usize) -> Self {
        assert!((1..=BinSeq::CAPACITY + 1).contains(&max_len));
        SplitCodedOne { max_len }
    }
}

impl Poset for SplitCodedOne {
    type Cond = BinSeq;

    fn top(&self) -> BinSeq {
        BinSeq::empty()
    }

    fn leq(&self, p: &BinSeq, q: &BinSeq) -> bool {
        p.extends(q)
    }

    fn contains(&self, c: &BinSeq) -> bool {
        c.len() < self.max_len && is_split_coded(c)
    }

    fn rank(&self, c: &BinSeq) -> usize {
        c.len()
    }

    fn max_rank(&self) -> usize {
        self.max_len - 1
    }

    fn extensions_at(&self, c: &BinSeq, extra: usize) -> Vec<BinSeq> {
        // a coded extension of a coded string adds an even number of bits
        // (odd from the empty string) and ends in a marker
        let parity_ok = if c.is_empty() {
            extra == 0 || extra % 2 == 1
        } else {
            extra.is_multiple_of(2)
        };
        if !parity_ok || c.len() + extra >= self.max_len {
            return Vec::new();
        }
        suffixes(extra, true)
            .map(|s| c.concat(&s).expect("within capacity"))
            .collect()
    }

    fn extension_count_hint(&self, _c: &BinSeq, extra: usize) -> usize {
        pow2(extra.saturating_sub(1))
    }

    fn weaker(&self, c: &BinSeq) -> Vec<BinSeq> {
        c.prefixes().filter(is_split_coded).collect()
    }
}

/// The dense sub-poset of sequences whose length is a multiple of `block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockAligned {
    pub block: usize,
    pub max_len: usize,
}

impl BlockAligned {
    pub fn new(block: usize, max_len: usize) -> Self {
        assert!(block >= 1 && (1..=BinSeq::CAPACITY + 1).contains(&max_len));
        BlockAligned { block, max_len }
    }
}

impl Poset for BlockAligned {
    type Cond = BinSeq;

    fn top(&self) -> BinSeq {
        BinSeq::empty()
    }

    fn leq(&self, p: &BinSeq, q: &BinSeq) -> bool {
        p.extends(q)
    }

    fn contains(&self, c: &BinSeq) -> bool {
        c.len() < self.max_len && c.len().is_multiple_of(self.block)
    }

    fn rank(&self, c: &BinSeq) -> usize {
        c.len()
    }

    fn max_rank(&self) -> usize {
        self.max_len - 1
    }

    fn extensions_at(&self, c: &BinSeq, extra: usize) -> Vec<BinSeq> {
        if !extra.is_multiple_of(self.block) || c.len() + extra >= self.max_len {
            return Vec::new();
        }
        suffixes(extra, false)
            .map(|s| c.concat(&s).expect("within capacity"))
            .collect()
    }

    fn extension_count_hint(&self, _c: &BinSeq, extra: usize) -> usize {
        pow2(extra)
    }

    fn weaker(&self, c: &BinSeq) -> Vec<BinSeq> {
        c.prefixes().filter(|p| p.len() % self.block == 0).collect()
    }
}

/// Finite partial maps from coordinates `< lambda` to sequences of length
/// `< max_len`, ordered by coordinate-wise end-extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohenMany {
    pub lambda: u32,
    pub max_len: usize,
}

impl CohenMany {
    pub fn new(lambda: u32, max_len: usize) -> Self {
        assert!(lambda >= 1 && (1..=BinSeq::CAPACITY + 1).contains(&max_len));
        CohenMany { lambda, max_len }
    }
}

/// Per-coordinate growth rule used to enumerate extension levels.
trait Growth {
    /// May a coordinate of current length `len` grow by `extra` bits?
    fn allowed(&self, len: usize, extra: usize) -> bool;
    /// Must a nonempty suffix end in 1?
    fn ends_in_marker(&self) -> bool;
}

struct FreeGrowth;

impl Growth for FreeGrowth {
    fn allowed(&self, _len: usize, _extra: usize) -> bool {
        true
    }
    fn ends_in_marker(&self) -> bool {
        false
    }
}

struct CodedGrowth;

impl Growth for CodedGrowth {
    fn allowed(&self, len: usize, extra: usize) -> bool {
        extra == 0 || len.is_multiple_of(2) == (extra % 2 == 1)
    }
    fn ends_in_marker(&self) -> bool {
        true
    }
}

fn grow_many(
    c: &ManyCondition,
    lambda: u32,
    max_len: usize,
    extra: usize,
    growth: &dyn Growth,
) -> Vec<ManyCondition> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        c: &ManyCondition,
        coord: u32,
        lambda: u32,
        max_len: usize,
        remaining: usize,
        growth: &dyn Growth,
        acc: &mut ManyCondition,
        out: &mut Vec<ManyCondition>,
    ) {
        if coord == lambda {
            if remaining == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let base = c.get(coord);
        let room = max_len.saturating_sub(1 + base.len());
        for e in 0..=remaining.min(room) {
            if !growth.allowed(base.len(), e) {
                continue;
            }
            for s in suffixes(e, growth.ends_in_marker()) {
                acc.set(coord, base.concat(&s).expect("within capacity"));
                go(c, coord + 1, lambda, max_len, remaining - e, growth, acc, out);
            }
        }
        acc.set(coord, base);
    }
    let mut out = Vec::new();
    let mut acc = c.clone();
    go(c, 0, lambda, max_len, extra, growth, &mut acc, &mut out);
    out
}

fn many_count_hint(lambda: u32, extra: usize) -> usize {
    // compositions of `extra` into `lambda` parts, times 2^extra
    let mut comps: usize = 1;
    for i in 1..lambda as usize {
        comps = comps.saturating_mul(extra + i) / i;
    }
    comps.saturating_mul(pow2(extra))
}

fn cartesian_prefixes(c: &ManyCondition, options: impl Fn(&BinSeq) -> Vec<BinSeq>) -> Vec<ManyCondition> {
    let mut out = vec![ManyCondition::new()];
    for (k, v) in c.iter() {
        let opts = options(&v);
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for m in &out {
            for o in &opts {
                let mut m = m.clone();
                m.set(k, *o);
                next.push(m);
            }
        }
        out = next;
    }
    out
}

impl Poset for CohenMany {
    type Cond = ManyCondition;

    fn top(&self) -> ManyCondition {
        ManyCondition::new()
    }

    fn leq(&self, p: &ManyCondition, q: &ManyCondition) -> bool {
        p.extends(q)
    }

    fn contains(&self, c: &ManyCondition) -> bool {
        c.iter().all(|(k, v)| k < self.lambda && v.len() < self.max_len)
    }

    fn rank(&self, c: &ManyCondition) -> usize {
        c.total_len()
    }

    fn max_rank(&self) -> usize {
        self.lambda as usize * (self.max_len - 1)
    }

    fn extensions_at(&self, c: &ManyCondition, extra: usize) -> Vec<ManyCondition> {
        let mut v = grow_many(c, self.lambda, self.max_len, extra, &FreeGrowth);
        v.sort();
        v
    }

    fn extension_count_hint(&self, _c: &ManyCondition, extra: usize) -> usize {
        many_count_hint(self.lambda, extra)
    }

    fn weaker(&self, c: &ManyCondition) -> Vec<ManyCondition> {
        let mut v = cartesian_prefixes(c, |s| s.prefixes().collect());
        v.sort();
        v
    }
}

/// The dense sub-poset of many-coordinate coded conditions: every value
/// coded and all values with the same marker count. The empty map is its top.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LambdaCoded {
    pub lambda: u32,
    pub max_len: usize,
}

impl LambdaCoded {
    pub fn new(lambda: u32, max_len: usize) -> Self {
        assert!(lambda >= 1 && (1..=BinSeq::CAPACITY + 1).contains(&max_len));
        LambdaCoded { lambda, max_len }
    }

    pub fn ambient(&self) -> CohenMany {
        CohenMany::new(self.lambda, self.max_len)
    }

    /// All members whose values all have length `<= coord_len`, ascending.
    pub fn enumerate_coordinate_bounded(&self, coord_len: usize) -> Vec<ManyCondition> {
        let bounded = LambdaCoded::new(self.lambda, coord_len.min(self.max_len - 1) + 1);
        let mut out = Vec::new();
        for k in 0..=bounded.max_rank() {
            out.extend(bounded.extensions_at(&ManyCondition::new(), k));
        }
        out
    }
}

fn uniform_markers(m: &ManyCondition) -> bool {
    let mut counts = m.iter().map(|(_, v)| marker_count(&v));
    match counts.next() {
        None => true,
        Some(g) => counts.all(|h| h == g),
    }
}

impl Poset for LambdaCoded {
    type Cond = ManyCondition;

    fn top(&self) -> ManyCondition {
        ManyCondition::new()
    }

    fn leq(&self, p: &ManyCondition, q: &ManyCondition) -> bool {
        p.extends(q)
    }

    fn contains(&self, c: &ManyCondition) -> bool {
        self.ambient().contains(c) && super::codec::is_lambda_coded(c)
    }

    fn rank(&self, c: &ManyCondition) -> usize {
        c.total_len()
    }

    fn max_rank(&self) -> usize {
        self.lambda as usize * (self.max_len - 1)
    }

    fn extensions_at(&self, c: &ManyCondition, extra: usize) -> Vec<ManyCondition> {
        let mut v: Vec<_> = grow_many(c, self.lambda, self.max_len, extra, &CodedGrowth)
            .into_iter()
            .filter(uniform_markers)
            .collect();
        v.sort();
        v
    }

    fn extension_count_hint(&self, _c: &ManyCondition, extra: usize) -> usize {
        many_count_hint(self.lambda, extra)
    }

    fn weaker(&self, c: &ManyCondition) -> Vec<ManyCondition> {
        let gamma = c.iter().next().map_or(0, |(_, v)| marker_count(&v));
        let coords: Vec<u32> = c.domain().collect();
        let mut out = vec![ManyCondition::new()];
        for cut in 1..=gamma {
            let cuts: Vec<(u32, BinSeq)> = coords
                .iter()
                .map(|&k| {
                    let v = c.get(k);
                    let end = v
                        .iter()
                        .enumerate()
                        .filter(|&(i, b)| i % 2 == 0 && b)
                        .nth(cut - 1)
                        .map(|(i, _)| i + 1)
                        .expect("every value has gamma markers");
                    (k, v.prefix(end))
                })
                .collect();
            for mask in 1u64..(1 << coords.len()) {
                out.push(ManyCondition::from_entries(
                    cuts.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, kv)| *kv),
                ));
            }
        }
        out.sort();
        out
    }
}
