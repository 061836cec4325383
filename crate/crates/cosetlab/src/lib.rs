//! A laboratory for additive combinatorics over small finite groups.
//!
//! The crate builds concrete groups from Cayley tables or standard families
//! (cyclic, elementary vector, dihedral, symmetric, direct products), and
//! studies subsets through sumset growth, stability ladders, weak normality,
//! Sidon tests, coset-structure recovery, and boolean synthesis from
//! translates. Everything is exact: ratios are big rationals, searches are
//! exhaustive within documented budgets, and randomized instance generation
//! is seeded ChaCha8 so every experiment replays bit-for-bit.

pub mod bits;
pub mod error;
pub mod gen;
pub mod group;
pub mod growth;
pub mod report;
pub mod stability;
pub mod structure;
pub mod sweep;

pub use error::{Error, Result};
pub use group::{Group, GroupKind, GroupSet, Side};
