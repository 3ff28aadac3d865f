//! Scan drivers and comparison metrics: (θ, φ) field maps of every scalar
//! measure, κ–n butterfly grids, line slices, and the correlation distance D
//! between field maps.

pub mod grid;

pub use grid::{ButterflyGrid, FieldMap, FieldParams, ThetaPhiGrid};
