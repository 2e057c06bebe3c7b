//! Word transducer models with polynomial-size output: streaming string
//! transducers (SSTs), HDT0L systems, comparison-free pebble transducers
//! (CFPTs) and the composition-by-substitution expression algebra built on
//! top of them, together with the analysis toolkit (producing triples,
//! pumping families for unary inputs, poly-uniformity certificates).
//!
//! Everything is exact and deterministic; randomness only appears in tests.

pub mod alphabet;
pub mod analysis;
pub mod assign;
pub mod cfp;
pub mod cfpt;
pub mod corpus;
pub mod hdt0l;
pub mod json;
pub mod machines;
pub mod sequences;
pub mod sst;

pub use alphabet::{Alphabet, Dfa, FreeMorphism, Word};
pub use assign::{idempotent_power, MixedWord, Monoid, RegAssignment, Shape, Tok, Wreath};
pub use sst::{SequentialTransducer, Sst};

/// Errors shared by the whole crate. The CLI maps these onto exit codes, so
/// the split between `Invalid`, `Inapplicable`, `Bound` and `Budget` matters.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid: {0}")]
    Invalid(String),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("step budget exhausted after {0} steps")]
    Budget(u64),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
