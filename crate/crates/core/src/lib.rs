//! Verification workbench for Apéry-style continued fractions.

pub mod catalog;
pub mod cfcore;
pub mod error;
pub mod integrals;
pub mod numkit;
pub mod qser;
pub mod rvgroup;
pub mod transforms;

pub use error::{Error, Result};
