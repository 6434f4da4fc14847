//! Projections from the coded sub-posets onto Cohen posets, built from a
//! dictionary: decode the blocks, translate each one, concatenate.

use crate::bits::BinSeq;
use crate::cohen::codec::append_block;
use crate::cohen::{
    decode_blocks, decode_lambda, encode_lambda, CohenMany, CohenOne, LambdaCoded,
    LambdaSplitCoded, ManyCondition, SplitCoded, SplitCodedOne,
};
use crate::dictionary::{Dictionary, DictionaryMany};
use crate::error::{Error, Result};
use crate::order::{Poset, Projection};

/// `d(p_0)⌢d(p_1)⌢…` over the blocks of `p`.
pub fn project_one(d: &Dictionary, p: &SplitCoded) -> Result<BinSeq> {
    decode_blocks(p)
        .iter()
        .try_fold(BinSeq::empty(), |acc, b| acc.concat(&d.forward(b)))
}

/// The canonical witness below `p` whose image is exactly `q`: `p` followed
/// by one block carrying `d⁻¹` of the part of `q` past the image of `p`.
///
/// When that part is empty and `p` is not the top, no strictly stronger
/// coded condition has the same image, so `p` itself is returned.
pub fn lift_one(d: &Dictionary, p: &SplitCoded, q: &BinSeq, max_len: usize) -> Result<SplitCoded> {
    let image = project_one(d, p)?;
    if !q.extends(&image) {
        return Err(Error::NotBelow);
    }
    let x = d.inverse(&q.suffix_from(image.len()));
    if x.is_empty() && !p.seq().is_empty() {
        return Ok(*p);
    }
    let mut seq = p.seq();
    let closed = append_block(&mut seq, &x).map_err(|_| Error::bound("coded length", max_len))?;
    debug_assert!(closed);
    if seq.len() >= max_len {
        return Err(Error::bound("coded length", max_len));
    }
    SplitCoded::new(seq)
}

/// Coordinate-wise concatenation of the translated slices of `p`.
pub fn project_many(d: &DictionaryMany, p: &LambdaSplitCoded) -> Result<ManyCondition> {
    decode_lambda(p)
        .iter()
        .try_fold(ManyCondition::new(), |acc, slice| acc.concat(&d.forward(slice)))
}

/// One more slice carrying `d⁻¹` of the strict extension part of `q`; every
/// other coordinate of `p` gets a padding block.
pub fn lift_many(
    d: &DictionaryMany,
    p: &LambdaSplitCoded,
    q: &ManyCondition,
    max_len: usize,
) -> Result<LambdaSplitCoded> {
    let image = project_many(d, p)?;
    let z = q.strip_prefix(&image)?;
    let x = d.inverse(&z);
    encode_lambda(&[x], p, max_len)
}

/// The single-coordinate projection as a [`Projection`] from the coded
/// sub-poset onto the Cohen poset.
#[derive(Clone, Debug)]
pub struct OneProjection {
    pub dict: Dictionary,
    domain: SplitCodedOne,
    codomain: CohenOne,
}

impl OneProjection {
    pub fn new(dict: Dictionary, domain_max_len: usize, codomain_max_len: usize) -> Self {
        OneProjection {
            dict,
            domain: SplitCodedOne::new(domain_max_len),
            codomain: CohenOne::new(codomain_max_len),
        }
    }
}

impl Projection for OneProjection {
    type Domain = SplitCodedOne;
    type Codomain = CohenOne;

    fn domain(&self) -> &SplitCodedOne {
        &self.domain
    }

    fn codomain(&self) -> &CohenOne {
        &self.codomain
    }

    fn apply(&self, p: &BinSeq) -> Result<BinSeq> {
        let image = project_one(&self.dict, &SplitCoded::new(*p)?)?;
        if !self.codomain.contains(&image) {
            return Err(Error::bound("projected length", self.codomain.max_len));
        }
        Ok(image)
    }

    fn lift(&self, p: &BinSeq, q: &BinSeq) -> Option<Result<BinSeq>> {
        Some(
            SplitCoded::new(*p)
                .and_then(|p| lift_one(&self.dict, &p, q, self.domain.max_len))
                .map(|s| s.seq()),
        )
    }

    fn exact_lift(&self) -> bool {
        true
    }
}

/// The many-coordinate projection from the coded sub-poset onto the
/// many-coordinate Cohen poset.
#[derive(Clone, Debug)]
pub struct ManyProjection {
    pub dict: DictionaryMany,
    domain: LambdaCoded,
    codomain: CohenMany,
}

impl ManyProjection {
    pub fn new(dict: DictionaryMany, lambda: u32, domain_max_len: usize, codomain_max_len: usize) -> Self {
        ManyProjection {
            dict,
            domain: LambdaCoded::new(lambda, domain_max_len),
            codomain: CohenMany::new(lambda, codomain_max_len),
        }
    }
}

impl Projection for ManyProjection {
    type Domain = LambdaCoded;
    type Codomain = CohenMany;

    fn domain(&self) -> &LambdaCoded {
        &self.domain
    }

    fn codomain(&self) -> &CohenMany {
        &self.codomain
    }

    fn apply(&self, p: &ManyCondition) -> Result<ManyCondition> {
        let image = project_many(&self.dict, &LambdaSplitCoded::new(p.clone())?)?;
        if !self.codomain.contains(&image) {
            return Err(Error::bound("projected condition", self.codomain.max_len));
        }
        Ok(image)
    }

    fn lift(&self, p: &ManyCondition, q: &ManyCondition) -> Option<Result<ManyCondition>> {
        Some(
            LambdaSplitCoded::new(p.clone())
                .and_then(|p| lift_many(&self.dict, &p, q, self.domain.max_len))
                .map(LambdaSplitCoded::into_condition),
        )
    }

    fn exact_lift(&self) -> bool {
        true
    }
}
