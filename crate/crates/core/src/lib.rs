//! A desk-scale laboratory for Cohen forcing over finite truncations.

pub mod approximation;
pub mod bits;
pub mod cli;
pub mod cohen;
pub mod dictionary;
pub mod error;
pub mod experiments;
pub mod iteration;
pub mod order;
pub mod projections;
pub mod sampling;
pub mod term;

pub use bits::BinSeq;
pub use error::{Error, Result};
