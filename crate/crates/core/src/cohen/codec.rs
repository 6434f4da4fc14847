//! Split-point codecs.
//!
//! Positions are 0-based. Even positions carry structure (1 = split marker,
//! 0 = filler) and odd positions carry payload. Block `α` of a coded string
//! is the segment ending at marker `α`, so block 0 precedes the first marker;
//! its payload is the odd-position bits inside it.
//!
//! The single-coordinate codec stores payload verbatim. The many-coordinate
//! codec appends a sentinel `0` to every real payload and erases the last
//! payload bit of every block on decode, which turns padding blocks into empty
//! values.

use serde::Serialize;

use super::many::ManyCondition;
use crate::bits::BinSeq;
use crate::error::{Error, Result};

/// Empty, or of odd length ending in a split marker.
pub fn is_split_coded(s: &BinSeq) -> bool {
    s.is_empty() || (s.len() % 2 == 1 && s.last() == Some(true))
}

/// Number of split markers (1s at even positions).
pub fn marker_count(s: &BinSeq) -> usize {
    s.iter().step_by(2).filter(|&b| b).count()
}

/// A condition of the dense coded sub-poset of the single Cohen poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SplitCoded(BinSeq);

impl SplitCoded {
    pub fn new(s: BinSeq) -> Result<Self> {
        if is_split_coded(&s) {
            Ok(SplitCoded(s))
        } else {
            Err(Error::MalformedCondition(format!(
                "{s} is not split-coded (needs odd length and a final 1)"
            )))
        }
    }

    pub fn seq(&self) -> BinSeq {
        self.0
    }

    pub fn markers(&self) -> usize {
        marker_count(&self.0)
    }
}

/// Blocks of a coded string, payload as-is.
pub fn decode_blocks(p: &SplitCoded) -> Vec<BinSeq> {
    let mut blocks = Vec::new();
    let mut current = BinSeq::empty();
    for (i, b) in p.0.iter().enumerate() {
        if i % 2 == 1 {
            current.push(b).expect("payload is shorter than its source");
        } else if b {
            blocks.push(std::mem::take(&mut current));
        }
    }
    blocks
}

/// Append one block whose payload is `payload`: each payload bit lands on
/// the next odd position (with a 0 filler in front when the string currently
/// has even length), then a marker lands on the next even position. An empty
/// payload only fits when the string has even length, i.e. at position 0.
pub(crate) fn append_block(s: &mut BinSeq, payload: &BinSeq) -> Result<bool> {
    for b in payload.iter() {
        if s.len().is_multiple_of(2) {
            s.push(false)?;
        }
        s.push(b)?;
    }
    if s.len() % 2 == 1 {
        return Ok(false);
    }
    s.push(true)?;
    Ok(true)
}

fn check_len(s: &BinSeq, max_len: usize, what: &str) -> Result<()> {
    if s.len() >= max_len {
        Err(Error::bound(what, max_len))
    } else {
        Ok(())
    }
}

/// Code a block sequence. Every block after the first must be nonempty,
/// since its first payload bit occupies the odd position right after the
/// previous marker.
pub fn encode_blocks(blocks: &[BinSeq], max_len: usize) -> Result<SplitCoded> {
    let mut s = BinSeq::empty();
    for (index, b) in blocks.iter().enumerate() {
        if !append_block(&mut s, b).map_err(|_| Error::bound("coded length", max_len))? {
            return Err(Error::EmptyBlock { index });
        }
        check_len(&s, max_len, "coded length")?;
    }
    Ok(SplitCoded(s))
}

/// The least coded extension: `p⌢1` for even length, `p⌢01` for odd length.
pub fn densify(p: &BinSeq, max_len: usize) -> Result<SplitCoded> {
    let mut s = *p;
    let grow = |s: &mut BinSeq, b| s.push(b).map_err(|_| Error::bound("coded length", max_len));
    if s.len() % 2 == 1 {
        grow(&mut s, false)?;
    }
    grow(&mut s, true)?;
    check_len(&s, max_len, "coded length")?;
    Ok(SplitCoded(s))
}

/// A condition of the dense coded sub-poset of the many-coordinate Cohen
/// poset: every value coded, all with the same number of markers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct LambdaSplitCoded(ManyCondition);

impl LambdaSplitCoded {
    pub fn new(m: ManyCondition) -> Result<Self> {
        if let Some(reason) = lambda_coded_defect(&m) {
            return Err(Error::MalformedCondition(reason));
        }
        Ok(LambdaSplitCoded(m))
    }

    pub fn empty() -> Self {
        LambdaSplitCoded(ManyCondition::new())
    }

    pub fn condition(&self) -> &ManyCondition {
        &self.0
    }

    pub fn into_condition(self) -> ManyCondition {
        self.0
    }

    /// Shared marker count; 0 for the empty map.
    pub fn gamma(&self) -> usize {
        self.0.iter().next().map_or(0, |(_, v)| marker_count(&v))
    }
}

/// Why `m` is not many-coordinate coded, if it is not.
pub fn lambda_coded_defect(m: &ManyCondition) -> Option<String> {
    let mut gamma = None;
    for (k, v) in m.iter() {
        if !is_split_coded(&v) {
            return Some(format!("coordinate {k}: {v} is not split-coded"));
        }
        let g = marker_count(&v);
        match gamma {
            None => gamma = Some(g),
            Some(h) if h != g => {
                return Some(format!("coordinate {k} has {g} markers, expected {h}"));
            }
            _ => {}
        }
    }
    None
}

pub fn is_lambda_coded(m: &ManyCondition) -> bool {
    lambda_coded_defect(m).is_none()
}

/// Slices of a many-coordinate coded condition, with the last payload bit
/// of every block erased and empty values dropped.
pub fn decode_lambda(p: &LambdaSplitCoded) -> Vec<ManyCondition> {
    let gamma = p.gamma();
    let mut slices = vec![ManyCondition::new(); gamma];
    for (coord, value) in p.0.iter() {
        let blocks = decode_blocks(&SplitCoded(value));
        for (alpha, block) in blocks.into_iter().enumerate() {
            let erased = block.prefix(block.len().saturating_sub(1));
            slices[alpha].set(coord, erased);
        }
    }
    slices
}

/// Append slices to `base`. Every coordinate touched so far gains exactly
/// one marker per slice: a real block `value⌢0` where the slice has the
/// coordinate, a padding block otherwise (`1` at position 0, `01` after a
/// marker). A coordinate first seen at slice `α` is first padded up to the
/// current marker count.
pub fn encode_lambda(
    slices: &[ManyCondition],
    base: &LambdaSplitCoded,
    max_len: usize,
) -> Result<LambdaSplitCoded> {
    let mut out = base.0.clone();
    let overflow = |_| Error::bound("coded length", max_len);
    for (gamma, slice) in (base.gamma()..).zip(slices) {
        for coord in slice.domain() {
            if !out.contains_coord(coord) {
                let mut s = BinSeq::empty();
                for _ in 0..gamma {
                    append_pad(&mut s).map_err(overflow)?;
                }
                out.entries_mut().insert(coord, s);
            }
        }
        let coords: Vec<u32> = out.domain().collect();
        for coord in coords {
            let mut s = out.get(coord);
            let value = slice.get(coord);
            if value.is_empty() {
                append_pad(&mut s).map_err(overflow)?;
            } else {
                let raw = value.with(false).map_err(overflow)?;
                append_block(&mut s, &raw).map_err(overflow)?;
            }
            check_len(&s, max_len, "coded length")?;
            out.set(coord, s);
        }
    }
    Ok(LambdaSplitCoded(out))
}

fn append_pad(s: &mut BinSeq) -> Result<()> {
    let raw = if s.is_empty() {
        BinSeq::empty()
    } else {
        BinSeq::empty().with(false)?
    };
    let closed = append_block(s, &raw)?;
    debug_assert!(closed, "padding always closes its block");
    Ok(())
}

/// A coded extension of `p`: each value densified, then padded up to the
/// largest marker count.
pub fn densify_lambda(p: &ManyCondition, max_len: usize) -> Result<LambdaSplitCoded> {
    let mut out = ManyCondition::new();
    for (k, v) in p.iter() {
        out.set(k, densify(&v, max_len)?.seq());
    }
    let gamma = out.iter().map(|(_, v)| marker_count(&v)).max().unwrap_or(0);
    let coords: Vec<u32> = out.domain().collect();
    for k in coords {
        let mut s = out.get(k);
        while marker_count(&s) < gamma {
            append_pad(&mut s).map_err(|_| Error::bound("coded length", max_len))?;
        }
        check_len(&s, max_len, "coded length")?;
        out.set(k, s);
    }
    Ok(LambdaSplitCoded(out))
}
