//! Exact combinatorics for uniform set families: extensions, sparsity,
//! intersection conditions, extension generators, split counting, sunflower
//! detection and block-partition predicates, each paired with brute-force
//! oracles.

pub mod error;
pub mod exactmath;
pub mod construction;
pub mod extension;
pub mod family;
pub mod format;
pub mod gamma;
pub mod gen;
pub mod generator;
pub mod oracle;
pub mod split;
pub mod sunflower;
pub mod cli;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::{Holds, Value, VerdictReport, Witness};
pub use family::{ElementSet, PairWeight, SetFamily, Sparsity, Universe};
