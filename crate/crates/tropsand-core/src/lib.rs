//! Abelian sandpiles on rational lattice polygons and the tropical curves
//! they converge to.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command line live in the `tropsand` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod experiments;
pub mod geometry;
pub mod sandpile;
pub mod tropical;

pub use error::{Error, Result};
pub use geometry::{LatticePolygon, LatticeVector, Point, Rational};
