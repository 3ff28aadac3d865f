//! Husimi phase-space distribution Q(θ,φ) = |⟨θ,φ|ψ⟩|².

use rayon::prelude::*;

use crate::analysis::grid::{FieldMap, FieldParams, ThetaPhiGrid};
use crate::error::{Error, Result};
use crate::spin::{QuantumState, SpinSystem};

/// Samples |⟨θ,φ|ψ⟩|² on the grid; with `normalized` the values are scaled by
/// (2j+1)/(4π) so the sinθ-weighted integral over the sphere is 1.
pub fn husimi_map(
    sys: &SpinSystem,
    state: &QuantumState,
    grid: &ThetaPhiGrid,
    normalized: bool,
) -> Result<FieldMap> {
    if state.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: state.dim(),
        });
    }
    let scale = if normalized {
        sys.dim() as f64 / (4.0 * std::f64::consts::PI)
    } else {
        1.0
    };
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (theta, phi) = grid.point(idx);
            let probe = sys.coherent_state(theta, phi);
            scale * probe.overlap(state).norm_sqr()
        })
        .collect();
    FieldMap::new(
        grid.clone(),
        values,
        "husimi",
        FieldParams {
            j: Some(sys.j()),
            normalized: Some(normalized),
            ..FieldParams::default()
        },
    )
}
