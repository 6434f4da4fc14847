//! Brute-force reference implementations written from the definitions,
//! sharing no code with the library beyond plain data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cohen_lab::order::FinitePoset;

/// Blocks of a split-coded string: payload is the odd-position bits between
/// consecutive even-position 1s.
pub fn decode(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for (i, c) in s.chars().enumerate() {
        if i % 2 == 1 {
            cur.push(c);
        } else if c == '1' {
            out.push(std::mem::take(&mut cur));
        }
    }
    out
}

/// Payload bits at odd positions, 0 fillers at even positions, then a 1 at
/// the next even position. `None` when a block other than the first is
/// empty: the odd slot after a marker must hold payload.
pub fn encode(blocks: &[String]) -> Option<String> {
    let mut s = String::new();
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 && b.is_empty() {
            return None;
        }
        for c in b.chars() {
            if s.len().is_multiple_of(2) {
                s.push('0');
            }
            s.push(c);
        }
        if s.len() % 2 == 1 {
            s.push('0');
        }
        s.push('1');
    }
    Some(s)
}

/// Every block sequence whose encoding has length at most `max_len`.
pub fn block_sequences(max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<String>> = vec![vec![]];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for seq in &frontier {
            let used = encode(seq).map_or(0, |s| s.len());
            for block in all_strings(max_len / 2) {
                let mut longer = seq.clone();
                longer.push(block);
                if let Some(e) = encode(&longer) {
                    if e.len() <= max_len && e.len() > used {
                        next.push(longer);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn all_strings(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut level = vec![String::new()];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|s| [format!("{s}0"), format!("{s}1")])
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

pub fn is_coded(s: &str) -> bool {
    s.is_empty() || (s.len() % 2 == 1 && s.ends_with('1'))
}

/// The many-coordinate decode: per coordinate blocks with the last payload
/// bit erased, sliced by block index, empty values dropped.
pub fn decode_many(m: &BTreeMap<u32, String>) -> Vec<BTreeMap<u32, String>> {
    let per: BTreeMap<u32, Vec<String>> = m.iter().map(|(k, v)| (*k, decode(v))).collect();
    let gamma = per.values().map(Vec::len).max().unwrap_or(0);
    (0..gamma)
        .map(|a| {
            per.iter()
                .filter_map(|(k, blocks)| {
                    let b = blocks.get(a)?;
                    let erased = &b[..b.len().saturating_sub(1)];
                    (!erased.is_empty()).then(|| (*k, erased.to_string()))
                })
                .collect()
        })
        .collect()
}

/// `F` generated by atom `m` meets `A` iff some member of `A` is above `m`.
pub fn atom_filter_meets(p: &FinitePoset, m: usize, a: &[usize]) -> bool {
    a.iter().any(|&x| p.le(m, x))
}

pub fn minimal_elements(p: &FinitePoset) -> Vec<usize> {
    (0..p.size())
        .filter(|&m| (0..p.size()).all(|x| x == m || !p.le(x, m)))
        .collect()
}

/// Every atom-generated filter meets `A` iff it meets `B`.
pub fn equiv_oracle(p: &FinitePoset, a: &[usize], b: &[usize]) -> bool {
    minimal_elements(p)
        .into_iter()
        .all(|m| atom_filter_meets(p, m, a) == atom_filter_meets(p, m, b))
}

/// Subsets of the carrier with no two distinct members sharing a lower bound.
pub fn antichains(p: &FinitePoset) -> Vec<Vec<usize>> {
    let n = p.size();
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|set| {
            set.iter().all(|&x| {
                set.iter()
                    .all(|&y| x == y || !(0..n).any(|z| p.le(z, x) && p.le(z, y)))
            })
        })
        .collect()
}

/// Approximation oracle on explicit element sets: the first `A ∈ V \ W`
/// (characteristic vectors in lexicographic order, element 0 first) such that
/// `A ∩ B ∈ W` for every `B ∈ W` with `|B| < delta`.
pub fn approximation_oracle(
    universe: usize,
    delta: usize,
    w: &BTreeSet<Vec<usize>>,
    v: &BTreeSet<Vec<usize>>,
) -> Option<Vec<usize>> {
    let vector = |s: &Vec<usize>| (0..universe).map(|i| s.contains(&i)).collect::<Vec<bool>>();
    let mut candidates: Vec<&Vec<usize>> = v.iter().filter(|a| !w.contains(*a)).collect();
    candidates.sort_by_key(|a| vector(a));
    candidates
        .into_iter()
        .find(|a| {
            w.iter().filter(|b| b.len() < delta).all(|b| {
                let meet: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
                w.contains(&meet)
            })
        })
        .cloned()
}
