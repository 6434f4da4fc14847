//! Finite binary sequences.
//!
//! A [`BinSeq`] packs up to [`BinSeq::CAPACITY`] bits into a `u64`. Bit 0 is
//! the most significant of the `len` low bits, so for a fixed length the
//! numeric order of the packed value coincides with the lexicographic order of
//! the sequence. The derived `Ord` is therefore shortlex: shorter sequences
//! first, then lexicographic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinSeq {
    // field order matters for the derived shortlex ordering
    len: u8,
    value: u64,
}

impl BinSeq {
    pub const CAPACITY: usize = 63;

    pub const fn empty() -> Self {
        BinSeq { len: 0, value: 0 }
    }

    /// The sequence of length `len` whose bits spell `value` in big-endian order.
    pub fn from_value(value: u64, len: usize) -> Result<Self> {
        if len > Self::CAPACITY {
            return Err(Error::bound("binary sequence length", Self::CAPACITY));
        }
        if len < 64 && value >> len != 0 {
            return Err(Error::MalformedCondition(format!(
                "value {value} does not fit in {len} bits"
            )));
        }
        Ok(BinSeq {
            len: len as u8,
            value,
        })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut s = BinSeq::empty();
        for &b in bits {
            s.push(b)?;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        if i >= self.len() {
            return None;
        }
        Some((self.value >> (self.len() - 1 - i)) & 1 == 1)
    }

    pub fn last(&self) -> Option<bool> {
        self.len().checked_sub(1).and_then(|i| self.get(i))
    }

    pub fn push(&mut self, bit: bool) -> Result<()> {
        if self.len() >= Self::CAPACITY {
            return Err(Error::bound("binary sequence length", Self::CAPACITY));
        }
        self.value = (self.value << 1) | bit as u64;
        self.len += 1;
        Ok(())
    }

    pub fn with(mut self, bit: bool) -> Result<Self> {
        self.push(bit)?;
        Ok(self)
    }

    pub fn concat(&self, other: &BinSeq) -> Result<Self> {
        let len = self.len() + other.len();
        if len > Self::CAPACITY {
            return Err(Error::bound("binary sequence length", Self::CAPACITY));
        }
        Ok(BinSeq {
            len: len as u8,
            value: (self.value << other.len()) | other.value,
        })
    }

    /// The initial segment of length `k` (the whole sequence if `k >= len`).
    pub fn prefix(&self, k: usize) -> Self {
        if k >= self.len() {
            return *self;
        }
        BinSeq {
            len: k as u8,
            value: self.value >> (self.len() - k),
        }
    }

    /// Everything from position `k` on.
    pub fn suffix_from(&self, k: usize) -> Self {
        if k >= self.len() {
            return BinSeq::empty();
        }
        let len = self.len() - k;
        BinSeq {
            len: len as u8,
            value: self.value & ((1u64 << len) - 1),
        }
    }

    pub fn is_prefix_of(&self, other: &BinSeq) -> bool {
        self.len() <= other.len() && other.prefix(self.len()) == *self
    }

    /// `self` end-extends `other`, i.e. `self <= other` in the Cohen order.
    pub fn extends(&self, other: &BinSeq) -> bool {
        other.is_prefix_of(self)
    }

    pub fn compatible(&self, other: &BinSeq) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Every prefix from the empty sequence up to `self`, shortest first.
    pub fn prefixes(&self) -> impl Iterator<Item = BinSeq> + '_ {
        (0..=self.len()).map(move |k| self.prefix(k))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| (self.value >> (self.len() - 1 - i)) & 1 == 1)
    }

    pub fn count_ones(&self) -> usize {
        self.value.count_ones() as usize
    }

    /// Flip every bit.
    pub fn complement(&self) -> Self {
        let mask = if self.len == 0 {
            0
        } else {
            u64::MAX >> (64 - self.len())
        };
        BinSeq {
            len: self.len,
            value: !self.value & mask,
        }
    }

    /// All sequences of exactly `len` bits in lexicographic order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BinSeq> {
        assert!(len <= 20, "refusing to enumerate 2^{len} sequences");
        (0..(1u64 << len)).map(move |v| BinSeq {
            len: len as u8,
            value: v,
        })
    }

    /// All sequences of length `< max_len`, in shortlex order.
    pub fn all_below(max_len: usize) -> impl Iterator<Item = BinSeq> {
        (0..max_len).flat_map(BinSeq::all_of_len)
    }
}

impl fmt::Display for BinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BinSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BinSeq::empty();
        for c in s.chars() {
            match c {
                '0' => out.push(false)?,
                '1' => out.push(true)?,
                _ => {
                    return Err(Error::MalformedCondition(format!(
                        "unexpected character {c:?} in bit string {s:?}"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for BinSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and fixtures; panics on malformed input.
pub fn bs(s: &str) -> BinSeq {
    s.parse().expect("valid bit string")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!(bs("").to_string(), "");
        assert_eq!(bs("00111").to_string(), "00111");
        assert!("012".parse::<BinSeq>().is_err());
    }

    #[test]
    fn shortlex_order() {
        let mut v = [bs("1"), bs("00"), bs(""), bs("0"), bs("10"), bs("01")];
        v.sort();
        let s: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(s, ["", "0", "1", "00", "01", "10"]);
    }

    #[test]
    fn prefix_suffix_concat() {
        let s = bs("110100");
        assert_eq!(s.prefix(3), bs("110"));
        assert_eq!(s.suffix_from(3), bs("100"));
        assert_eq!(s.prefix(3).concat(&s.suffix_from(3)).unwrap(), s);
        assert!(bs("11").is_prefix_of(&s));
        assert!(s.extends(&bs("1101")));
        assert!(!bs("10").is_prefix_of(&s));
        assert!(!bs("10").compatible(&s));
        assert_eq!(s.complement(), bs("001011"));
        assert_eq!(bs("").complement(), bs(""));
    }

    #[test]
    fn capacity_is_enforced() {
        let mut s = BinSeq::from_value(0, BinSeq::CAPACITY).unwrap();
        assert!(matches!(s.push(true), Err(Error::BoundExceeded { .. })));
        assert!(BinSeq::from_value(4, 2).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(BinSeq::all_below(4).count(), 1 + 2 + 4 + 8);
        let v: Vec<_> = BinSeq::all_below(4).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn serde_as_bit_string() {
        let j = serde_json::to_string(&bs("0110")).unwrap();
        assert_eq!(j, "\"0110\"");
        let back: BinSeq = serde_json::from_str(&j).unwrap();
        assert_eq!(back, bs("0110"));
    }
}
