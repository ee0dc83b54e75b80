//! Abelian sandpile engine: states, relaxations, waves and smoothing.

mod lattice;
mod smooth;
mod state;

pub use lattice::{Cylinder, Lattice, SINK};
pub use smooth::{smooth_linear_min, smooth_linear_min_observed, Smoothing, OVERDRAWN};
pub use state::{Odometer, SandState, Schedule, Territory, DEFAULT_BUDGET};
