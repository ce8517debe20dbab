//! Finite categorical engine for ML systems.

pub mod adjmonad;
pub mod category;
pub mod cli;
pub mod error;
pub mod fincat;
pub mod finset;
pub mod foundations;
pub mod functcat;
pub mod mlsys;
pub mod presheaf;
pub mod report;

pub use error::{Error, Result};
