//! Online s-factorization (self-referencing LZ77) of byte streams.

pub mod alphabet;
pub mod bitvec;
pub mod block_tree;
pub mod cli;
pub mod dawg;
pub mod error;
pub mod factor;
pub mod format;
pub mod oracle;
pub mod packed;
pub mod points;
pub mod rle;

pub use alphabet::{AlphabetCfg, BitInterval, MetaChar};
pub use bitvec::DynBitArray;
pub use dawg::{Dawg, DawgEvent, StateId};
pub use error::*;
pub use factor::{Factor, FactorKind};
pub use oracle::{naive_factorize, rle_encode, RLFactor};
