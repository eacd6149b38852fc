//! Complete mappings and orthomorphisms of finite groups: group tables,
//! explicit constructions, exhaustive and randomized search, generated
//! permutation groups and Latin-square parity types.

pub mod case_table;
pub mod constructions;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod group;
pub mod latin;
pub mod mapping;
pub mod pc;
pub mod search;
pub mod perm;
pub mod permgroup;
pub mod selector;
pub mod witness;

pub use error::{Error, Result};
pub use group::{FiniteGroup, Side, Subgroup};
pub use perm::{Parity, Perm, TotalOrder};
