#![allow(clippy::needless_range_loop)]
//! Exact computations with Looijenga pairs.

pub mod cones;
pub mod corpus;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod pair;
pub mod period;
pub mod roots;
pub mod torelli;
pub mod toric;

pub use error::{Error, Result};
