//! Simulation library for the entangling quantum kicked top and its classical
//! limit: Floquet evolution, entanglement entropy and its time averages,
//! classical trajectories with finite-time Lyapunov exponents and ignorance
//! measures, phase-space scans, and correlation distances between field maps.

pub mod analysis;
pub mod classical;
mod error;
pub mod quantum;
pub mod spin;

pub use error::{Error, Result};
pub use spin::{CMatrix, CVector, QuantumState, SpinSystem, UnitaryMatrix};
