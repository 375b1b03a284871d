//! Exact combinatorics of reductive groups and their duals: based root data,
//! Weyl groups, semisimple parameters, blocks, endoscopic data, Frobenius
//! series, finite tori, and a small Bott-Samelson bimodule engine.

pub mod lattice;
pub mod rootdata;
pub mod weyl;
pub mod sspoints;
pub mod blocks;
pub mod endoscopy;
pub mod rationality;
pub mod curtis;
pub mod poly;
pub mod soergel;
pub mod error;
pub mod pipeline;

pub use error::{Error, Result};
