//! Truncated Cohen posets, many-coordinate conditions and the split-point codecs.

pub mod codec;
pub mod many;
pub mod posets;

pub use codec::{
    decode_blocks, decode_lambda, densify, densify_lambda, encode_blocks, encode_lambda,
    is_lambda_coded, is_split_coded, marker_count, LambdaSplitCoded, SplitCoded,
};
pub use many::ManyCondition;
pub use posets::{BlockAligned, CohenMany, CohenOne, LambdaCoded, SplitCodedOne};
