//! Cell-centered (θ, φ) grids and scalar fields sampled on them — the common
//! currency of all scans and of the correlation distance.

use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform cell-centered grid over θ ∈ [0,π), φ ∈ [−π,π).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaPhiGrid {
    n_theta: usize,
    n_phi: usize,
    theta_values: Vec<f64>,
    phi_values: Vec<f64>,
}

impl ThetaPhiGrid {
    pub fn cell_centered(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid must be at least 2x2, got {n_theta}x{n_phi}"
            )));
        }
        let d_theta = std::f64::consts::PI / n_theta as f64;
        let d_phi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let theta_values = (0..n_theta)
            .map(|i| (i as f64 + 0.5) * d_theta)
            .collect();
        let phi_values = (0..n_phi)
            .map(|i| -std::f64::consts::PI + (i as f64 + 0.5) * d_phi)
            .collect();
        Ok(Self {
            n_theta,
            n_phi,
            theta_values,
            phi_values,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn theta_values(&self) -> &[f64] {
        &self.theta_values
    }

    pub fn phi_values(&self) -> &[f64] {
        &self.phi_values
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Δθ·Δφ of one cell.
    pub fn cell_area(&self) -> f64 {
        let d_theta = std::f64::consts::PI / self.n_theta as f64;
        let d_phi = 2.0 * std::f64::consts::PI / self.n_phi as f64;
        d_theta * d_phi
    }

    /// Row-major index, θ outer.
    pub fn index(&self, i_theta: usize, i_phi: usize) -> usize {
        i_theta * self.n_phi + i_phi
    }

    /// Inverse of `index`.
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index / self.n_phi, index % self.n_phi)
    }

    /// (θ, φ) at a flat index.
    pub fn point(&self, index: usize) -> (f64, f64) {
        let (it, ip) = self.coords(index);
        (self.theta_values[it], self.phi_values[ip])
    }
}

/// Provenance carried by a field map.
#[derive(Clone, Debug, Default, Serialize)]
pub struct FieldParams {
    pub j: Option<f64>,
    pub kappa: Option<f64>,
    pub kicks: Option<u64>,
    pub n_total: Option<u64>,
    pub n_transient: Option<u64>,
    pub eigenstate: Option<usize>,
    pub normalized: Option<bool>,
    pub quadruples: Option<Vec<[usize; 4]>>,
}

/// A scalar quantity sampled on a (θ, φ) grid.
#[derive(Clone, Debug)]
pub struct FieldMap {
    grid: ThetaPhiGrid,
    values: Vec<f64>,
    label: String,
    params: FieldParams,
}

impl FieldMap {
    /// Row-major values, θ outer. All values must be finite.
    pub fn new(
        grid: ThetaPhiGrid,
        values: Vec<f64>,
        label: impl Into<String>,
        params: FieldParams,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            let (it, ip) = grid.coords(bad);
            return Err(Error::InvalidParameter(format!(
                "non-finite field value at cell ({it}, {ip})"
            )));
        }
        Ok(Self {
            grid,
            values,
            label: label.into(),
            params,
        })
    }

    pub fn grid(&self) -> &ThetaPhiGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn value(&self, i_theta: usize, i_phi: usize) -> f64 {
        self.values[self.grid.index(i_theta, i_phi)]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Copy with negatives clamped to zero; returns the clamp count.
    pub fn clamped_nonnegative(&self) -> (FieldMap, usize) {
        let mut clamped = self.clone();
        let mut count = 0;
        for v in &mut clamped.values {
            if *v < 0.0 {
                *v = 0.0;
                count += 1;
            }
        }
        (clamped, count)
    }
}

/// Entanglement entropy over a (κ, n) grid for one initial condition.
#[derive(Clone, Debug)]
pub struct ButterflyGrid {
    pub kappa_values: Vec<f64>,
    pub n_values: Vec<u64>,
    /// Row-major, κ outer: values[ik * n_values.len() + in].
    pub values: Vec<f64>,
    pub theta: f64,
    pub phi: f64,
    pub j: f64,
}

impl ButterflyGrid {
    pub fn value(&self, i_kappa: usize, i_n: usize) -> f64 {
        self.values[i_kappa * self.n_values.len() + i_n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(ThetaPhiGrid::cell_centered(1, 10).is_err());
        assert!(ThetaPhiGrid::cell_centered(10, 1).is_err());
        assert!(ThetaPhiGrid::cell_centered(2, 2).is_ok());
    }

    #[test]
    fn cell_centered_coordinates() {
        let grid = ThetaPhiGrid::cell_centered(4, 8).unwrap();
        assert_eq!(grid.theta_values().len(), 4);
        assert_eq!(grid.phi_values().len(), 8);
        assert_abs_diff_eq!(grid.theta_values()[0], PI / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(grid.phi_values()[0], -PI + PI / 8.0, epsilon = 1e-15);
        // Strictly increasing, inside the stated ranges.
        for w in grid.theta_values().windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(*grid.theta_values().last().unwrap() < PI);
        assert!(*grid.phi_values().last().unwrap() < PI);
        assert!(grid.theta_values()[0] > 0.0);
        assert!(grid.phi_values()[0] >= -PI);
        // Cells tile the full domain exactly.
        assert_abs_diff_eq!(
            grid.cell_area() * grid.len() as f64,
            2.0 * PI * PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn field_map_checks_dimensions_and_finiteness() {
        let grid = ThetaPhiGrid::cell_centered(2, 2).unwrap();
        assert!(FieldMap::new(grid.clone(), vec![0.0; 3], "x", FieldParams::default()).is_err());
        assert!(
            FieldMap::new(grid.clone(), vec![0.0, f64::NAN, 0.0, 0.0], "x", FieldParams::default())
                .is_err()
        );
        let map = FieldMap::new(grid, vec![1.0, -2.0, 3.0, 4.0], "x", FieldParams::default())
            .unwrap();
        assert_eq!(map.value(0, 1), -2.0);
        let (clamped, count) = map.clamped_nonnegative();
        assert_eq!(count, 1);
        assert_eq!(clamped.value(0, 1), 0.0);
    }
}
