//! Exact renormalization of irrational rotations.

pub mod error;
pub mod exact_reals;
pub mod oracle;
pub mod ostrowski;
pub mod beta_expansion;
pub mod walk_renorm;
pub mod discrepancy;
pub mod cli;

pub use error::{Error, Result};
