//! Exact structural identifiability analysis for linear compartment models.
#![no_std]

extern crate alloc;

pub mod arith;
pub mod coeff;
mod error;
pub mod graph;
pub mod ident;
pub mod model;
pub mod random;
pub mod transform;

pub use error::{Error, Result};
