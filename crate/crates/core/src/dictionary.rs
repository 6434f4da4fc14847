//! Bijections between the inner and outer Cohen posets that fix the empty
//! condition. The projection maps are built from these and nothing else.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BinSeq;
use crate::cohen::ManyCondition;
use crate::error::{Error, Result};

const ROUNDS: usize = 3;

fn mask(len: usize) -> u64 {
    if len == 0 {
        0
    } else {
        u64::MAX >> (64 - len)
    }
}

fn mul_inverse(m: u64) -> u64 {
    // Newton iteration for the inverse of an odd number mod 2^64
    let mut x = m;
    for _ in 0..6 {
        x = x.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(x)));
    }
    x
}

/// A seeded permutation of the sequences of each fixed length, so it is a
/// bijection on every truncation at once and fixes the empty sequence.
#[derive(Clone, PartialEq, Eq)]
pub struct Scramble {
    seed: u64,
    // per length: (xor key, odd multiplier, its inverse) for each round
    keys: Vec<[(u64, u64, u64); ROUNDS]>,
}

impl Scramble {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keys = (0..=BinSeq::CAPACITY)
            .map(|_| {
                std::array::from_fn(|_| {
                    let k: u64 = rng.gen();
                    let m: u64 = rng.gen::<u64>() | 1;
                    (k, m, mul_inverse(m))
                })
            })
            .collect();
        Scramble { seed, keys }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn shift(len: usize) -> usize {
        (len / 2).max(1)
    }

    pub fn forward(&self, s: &BinSeq) -> BinSeq {
        let len = s.len();
        if len == 0 {
            return *s;
        }
        let m = mask(len);
        let sh = Self::shift(len);
        let mut v = s.value();
        for &(k, mul, _) in &self.keys[len] {
            v = (v ^ k) & m;
            v = v.wrapping_mul(mul) & m;
            v ^= v >> sh;
        }
        BinSeq::from_value(v, len).expect("value masked to length")
    }

    pub fn inverse(&self, s: &BinSeq) -> BinSeq {
        let len = s.len();
        if len == 0 {
            return *s;
        }
        let m = mask(len);
        let sh = Self::shift(len);
        let mut v = s.value();
        for &(k, _, inv) in self.keys[len].iter().rev() {
            // undo v ^= v >> sh
            let y = v;
            let mut x = y;
            for _ in 0..len / sh + 1 {
                x = y ^ (x >> sh);
            }
            v = x.wrapping_mul(inv) & m;
            v = (v ^ k) & m;
        }
        BinSeq::from_value(v, len).expect("value masked to length")
    }
}

impl fmt::Debug for Scramble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scramble({})", self.seed)
    }
}

/// A bijection on binary sequences fixing the empty sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dictionary {
    Identity,
    /// Complement every bit.
    BitFlip,
    Scrambled(Scramble),
    /// A permutation of a finite set of sequences; everything else is fixed.
    Pairs {
        forward: BTreeMap<BinSeq, BinSeq>,
        inverse: BTreeMap<BinSeq, BinSeq>,
    },
}

/// Wire shape: `{"builtin": "identity" | "bitflip" | "scrambled", "seed": n}`
/// or `{"pairs": [["in", "out"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DictionarySpec {
    Builtin {
        builtin: String,
        #[serde(default)]
        seed: u64,
    },
    Pairs {
        pairs: Vec<(BinSeq, BinSeq)>,
    },
}

fn check_permutation<T: Ord + Clone + fmt::Display>(
    pairs: &[(T, T)],
    empty: &T,
) -> Result<(BTreeMap<T, T>, BTreeMap<T, T>)> {
    let mut forward = BTreeMap::new();
    let mut inverse = BTreeMap::new();
    for (a, b) in pairs {
        if forward.insert(a.clone(), b.clone()).is_some() {
            return Err(Error::InvalidDictionary(format!("input {a} listed twice")));
        }
        if inverse.insert(b.clone(), a.clone()).is_some() {
            return Err(Error::InvalidDictionary(format!("output {b} listed twice")));
        }
    }
    let ins: BTreeSet<&T> = forward.keys().collect();
    let outs: BTreeSet<&T> = inverse.keys().collect();
    if ins != outs {
        return Err(Error::InvalidDictionary(
            "inputs and outputs must be the same set so that unlisted values can stay fixed".into(),
        ));
    }
    if let Some(img) = forward.get(empty) {
        if img != empty {
            return Err(Error::InvalidDictionary(format!("the empty condition maps to {img}")));
        }
    }
    Ok((forward, inverse))
}

impl Dictionary {
    pub fn scrambled(seed: u64) -> Self {
        Dictionary::Scrambled(Scramble::new(seed))
    }

    /// Exchange `"0"` and `"1"`, fix everything else.
    pub fn swap01() -> Self {
        Self::from_pairs(&[
            ("0".parse().unwrap(), "1".parse().unwrap()),
            ("1".parse().unwrap(), "0".parse().unwrap()),
        ])
        .expect("valid permutation")
    }

    pub fn from_pairs(pairs: &[(BinSeq, BinSeq)]) -> Result<Self> {
        let (forward, inverse) = check_permutation(pairs, &BinSeq::empty())?;
        Ok(Dictionary::Pairs { forward, inverse })
    }

    pub fn from_spec(spec: &DictionarySpec) -> Result<Self> {
        match spec {
            DictionarySpec::Builtin { builtin, seed } => Self::builtin(builtin, *seed),
            DictionarySpec::Pairs { pairs } => Self::from_pairs(pairs),
        }
    }

    pub fn builtin(name: &str, seed: u64) -> Result<Self> {
        match name {
            "identity" => Ok(Dictionary::Identity),
            "bitflip" => Ok(Dictionary::BitFlip),
            "scrambled" => Ok(Dictionary::scrambled(seed)),
            "swap01" => Ok(Dictionary::swap01()),
            other => Err(Error::InvalidDictionary(format!("unknown built-in {other:?}"))),
        }
    }

    /// The three built-ins used for exhaustive checks.
    pub fn builtins(seed: u64) -> [Dictionary; 3] {
        [Dictionary::Identity, Dictionary::BitFlip, Dictionary::scrambled(seed)]
    }

    pub fn name(&self) -> String {
        match self {
            Dictionary::Identity => "identity".into(),
            Dictionary::BitFlip => "bitflip".into(),
            Dictionary::Scrambled(s) => format!("scrambled({})", s.seed()),
            Dictionary::Pairs { forward, .. } => format!("pairs({})", forward.len()),
        }
    }

    pub fn forward(&self, s: &BinSeq) -> BinSeq {
        match self {
            Dictionary::Identity => *s,
            Dictionary::BitFlip => s.complement(),
            Dictionary::Scrambled(sc) => sc.forward(s),
            Dictionary::Pairs { forward, .. } => forward.get(s).copied().unwrap_or(*s),
        }
    }

    pub fn inverse(&self, s: &BinSeq) -> BinSeq {
        match self {
            Dictionary::Identity => *s,
            Dictionary::BitFlip => s.complement(),
            Dictionary::Scrambled(sc) => sc.inverse(s),
            Dictionary::Pairs { inverse, .. } => inverse.get(s).copied().unwrap_or(*s),
        }
    }

    /// Exhaustive check on all sequences of length `< max_len`: fixes the
    /// empty sequence, inverse undoes forward, and forward is injective.
    pub fn validate_on(&self, max_len: usize) -> Result<()> {
        if !self.forward(&BinSeq::empty()).is_empty() {
            return Err(Error::InvalidDictionary("does not fix the empty sequence".into()));
        }
        let mut seen = BTreeSet::new();
        for s in BinSeq::all_below(max_len) {
            let f = self.forward(&s);
            if self.inverse(&f) != s {
                return Err(Error::InvalidDictionary(format!("inverse fails at {s}")));
            }
            if !seen.insert(f) {
                return Err(Error::InvalidDictionary(format!("not injective at {s}")));
            }
        }
        Ok(())
    }
}

/// A bijection on many-coordinate conditions fixing the empty map.
///
/// The built-ins act coordinate by coordinate (a permutation of coordinates
/// together with a bijection on each value). Only such separable
/// bijections commute with adding coordinates, which the coded projection
/// relies on for order preservation; `Pairs` allows arbitrary ones so that
/// the failure can be exhibited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DictionaryMany {
    Identity,
    BitFlip,
    /// Apply one value dictionary to every coordinate.
    Coordinatewise(Dictionary),
    /// Seeded permutation of coordinates `< lambda` plus an independent
    /// seeded scramble of each coordinate's values.
    Scrambled {
        seed: u64,
        perm: Vec<u32>,
        inv_perm: Vec<u32>,
        scrambles: Vec<Scramble>,
    },
    Pairs {
        forward: BTreeMap<ManyCondition, ManyCondition>,
        inverse: BTreeMap<ManyCondition, ManyCondition>,
    },
}

impl DictionaryMany {
    pub fn scrambled(seed: u64, lambda: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<u32> = (0..lambda).collect();
        // Fisher-Yates
        for i in (1..perm.len()).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let mut inv_perm = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv_perm[p as usize] = i as u32;
        }
        let scrambles = (0..lambda).map(|_| Scramble::new(rng.gen())).collect();
        DictionaryMany::Scrambled {
            seed,
            perm,
            inv_perm,
            scrambles,
        }
    }

    pub fn from_pairs(pairs: &[(ManyCondition, ManyCondition)]) -> Result<Self> {
        let (forward, inverse) = check_permutation(pairs, &ManyCondition::new())?;
        Ok(DictionaryMany::Pairs { forward, inverse })
    }

    pub fn builtin(name: &str, seed: u64, lambda: u32) -> Result<Self> {
        match name {
            "identity" => Ok(DictionaryMany::Identity),
            "bitflip" => Ok(DictionaryMany::BitFlip),
            "scrambled" => Ok(DictionaryMany::scrambled(seed, lambda)),
            other => Err(Error::InvalidDictionary(format!("unknown built-in {other:?}"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            DictionaryMany::Identity => "identity".into(),
            DictionaryMany::BitFlip => "bitflip".into(),
            DictionaryMany::Coordinatewise(d) => format!("coordinatewise({})", d.name()),
            DictionaryMany::Scrambled { seed, .. } => format!("scrambled({seed})"),
            DictionaryMany::Pairs { forward, .. } => format!("pairs({})", forward.len()),
        }
    }

    pub fn forward(&self, m: &ManyCondition) -> ManyCondition {
        match self {
            DictionaryMany::Identity => m.clone(),
            DictionaryMany::BitFlip => m.map_values(|_, v| v.complement()),
            DictionaryMany::Coordinatewise(d) => m.map_values(|_, v| d.forward(&v)),
            DictionaryMany::Scrambled {
                perm, scrambles, ..
            } => ManyCondition::from_entries(m.iter().map(|(k, v)| match perm.get(k as usize) {
                Some(&p) => (p, scrambles[k as usize].forward(&v)),
                None => (k, v),
            })),
            DictionaryMany::Pairs { forward, .. } => {
                forward.get(m).cloned().unwrap_or_else(|| m.clone())
            }
        }
    }

    pub fn inverse(&self, m: &ManyCondition) -> ManyCondition {
        match self {
            DictionaryMany::Identity => m.clone(),
            DictionaryMany::BitFlip => m.map_values(|_, v| v.complement()),
            DictionaryMany::Coordinatewise(d) => m.map_values(|_, v| d.inverse(&v)),
            DictionaryMany::Scrambled {
                inv_perm,
                scrambles,
                ..
            } => ManyCondition::from_entries(m.iter().map(|(k, v)| match inv_perm.get(k as usize) {
                Some(&src) => (src, scrambles[src as usize].inverse(&v)),
                None => (k, v),
            })),
            DictionaryMany::Pairs { inverse, .. } => {
                inverse.get(m).cloned().unwrap_or_else(|| m.clone())
            }
        }
    }
}
