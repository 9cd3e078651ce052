//! Essential algebras of finite posets: the product relations `R_{≤,m}`,
//! neighbourhoods of `∏ P_i^l`, c-minimal neighbourhoods up to
//! isomorphism, and brute-force oracles for cross-checking.

#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::type_complexity)]

pub mod config;
pub mod cube;
pub mod error;
pub mod poset;
pub mod essential;
pub mod nbhd;
pub mod oracle;
pub mod classify;
pub mod relalg;

pub use config::Budget;
pub use cube::Cube;
pub use error::{Error, Result};
pub use poset::Poset;
