//! Classical kicked-top map on the unit sphere: trajectories, tangent-map
//! Lyapunov exponents, the ignorance measure I_C, Poincaré sections, and
//! periodic orbits.

mod orbits;

pub use orbits::{find_periodic_orbits, PeriodicOrbit};

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Point on the unit sphere: the classical angular-momentum direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ClassicalState {
    /// Checks |x² + y² + z² − 1| ≤ 1e-12.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm_sq = x * x + y * y + z * z;
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { x, y, z })
    }

    /// (sinθcosφ, sinθsinφ, cosθ).
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    /// Inverse of `from_angles`: θ ∈ [0,π], φ ∈ (−π,π].
    pub fn angles(&self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }

    pub fn norm_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

/// One application of the map: a π/2 turn about y followed by the shear
/// rotation about z by κ·x — exactly norm-preserving.
pub fn classical_map(s: ClassicalState, kappa: f64) -> ClassicalState {
    let a = kappa * s.x;
    let (sin_a, cos_a) = a.sin_cos();
    ClassicalState {
        x: s.z * cos_a + s.y * sin_a,
        y: -s.z * sin_a + s.y * cos_a,
        z: -s.x,
    }
}

/// Exact partial derivatives of the map equations:
///
/// ∂x'/∂x = κ(y cos κx − z sin κx),  ∂x'/∂y = sin κx,  ∂x'/∂z = cos κx
/// ∂y'/∂x = −κ(z cos κx + y sin κx), ∂y'/∂y = cos κx,  ∂y'/∂z = −sin κx
/// ∂z'/∂x = −1,                      ∂z'/∂y = 0,       ∂z'/∂z = 0
pub fn classical_jacobian(s: ClassicalState, kappa: f64) -> Matrix3<f64> {
    let a = kappa * s.x;
    let (sin_a, cos_a) = a.sin_cos();
    Matrix3::new(
        kappa * (s.y * cos_a - s.z * sin_a),
        sin_a,
        cos_a,
        -kappa * (s.z * cos_a + s.y * sin_a),
        cos_a,
        -sin_a,
        -1.0,
        0.0,
        0.0,
    )
}

/// Unit tangent vector attached to a point on the sphere.
#[derive(Clone, Copy, Debug)]
pub struct TangentVector {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl TangentVector {
    /// Checks unit length and orthogonality to the base point within 1e-10.
    pub fn new(base: &ClassicalState, dx: f64, dy: f64, dz: f64) -> Result<Self> {
        let norm_sq = dx * dx + dy * dy + dz * dz;
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sq });
        }
        let dot = base.x * dx + base.y * dy + base.z * dz;
        if dot.abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "tangent vector not orthogonal to base point (dot = {dot:.3e})"
            )));
        }
        Ok(Self { dx, dy, dz })
    }

    /// Deterministic initial tangent: the normalized projection of (1,0,0)
    /// onto the tangent plane, falling back to (0,1,0) when the base point is
    /// too close to ±x.
    pub fn seed(base: &ClassicalState) -> Self {
        let s = base.as_vector();
        let mut v = Vector3::new(1.0, 0.0, 0.0);
        v -= s * s.dot(&v);
        if v.norm() < 1e-6 {
            v = Vector3::new(0.0, 1.0, 0.0);
            v -= s * s.dot(&v);
        }
        v.normalize_mut();
        Self {
            dx: v.x,
            dy: v.y,
            dz: v.z,
        }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.dx, self.dy, self.dz)
    }
}

/// Finite-time Lyapunov exponent at one initial condition, in nats per kick.
///
/// The tangent vector is pushed through the analytic Jacobian and rescaled to
/// unit length every step; log-stretches are accumulated only after the first
/// `n_transient` steps are discarded.
pub fn lyapunov_finite_time(
    theta: f64,
    phi: f64,
    kappa: f64,
    n_total: u64,
    n_transient: u64,
) -> Result<f64> {
    let s0 = ClassicalState::from_angles(theta, phi);
    lyapunov_with_tangent(s0, TangentVector::seed(&s0), kappa, n_total, n_transient)
}

fn lyapunov_with_tangent(
    mut s: ClassicalState,
    tangent: TangentVector,
    kappa: f64,
    n_total: u64,
    n_transient: u64,
) -> Result<f64> {
    if n_total <= n_transient {
        return Err(Error::InvalidParameter(format!(
            "n_total ({n_total}) must exceed n_transient ({n_transient})"
        )));
    }
    let mut t = tangent.as_vector();
    let mut log_sum = 0.0;
    for step in 0..n_total {
        t = classical_jacobian(s, kappa) * t;
        let stretch = t.norm();
        t /= stretch;
        s = classical_map(s, kappa);
        debug_assert!((s.norm_squared() - 1.0).abs() < 1e-9);
        if step >= n_transient {
            log_sum += stretch.ln();
        }
    }
    Ok(log_sum / (n_total - n_transient) as f64)
}

/// Classical ignorance I_C = ½[1 − (x̄² + ȳ² + z̄²)] over a trajectory of
/// `n_total` points; no transient discard by default.
pub fn classical_ignorance(
    theta: f64,
    phi: f64,
    kappa: f64,
    n_total: u64,
    n_transient: u64,
) -> Result<f64> {
    classical_ignorance_from(
        ClassicalState::from_angles(theta, phi),
        kappa,
        n_total,
        n_transient,
    )
}

/// `classical_ignorance` started from an exact state rather than angles
/// (the angle conversion costs one ulp, which matters on unstable orbits).
pub fn classical_ignorance_from(
    start: ClassicalState,
    kappa: f64,
    n_total: u64,
    n_transient: u64,
) -> Result<f64> {
    if n_total < 1 {
        return Err(Error::InvalidParameter(
            "ignorance needs at least one trajectory point".into(),
        ));
    }
    let mut s = start;
    for _ in 0..n_transient {
        s = classical_map(s, kappa);
    }
    let mut mean = Vector3::zeros();
    for _ in 0..n_total {
        mean += s.as_vector();
        s = classical_map(s, kappa);
        debug_assert!((s.norm_squared() - 1.0).abs() < 1e-9);
    }
    mean /= n_total as f64;
    Ok((0.5 * (1.0 - mean.norm_squared())).clamp(0.0, 0.5))
}

/// A recorded orbit with its seed and kick strength.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub points: Vec<ClassicalState>,
    pub kappa: f64,
    pub theta0: f64,
    pub phi0: f64,
}

/// Iterates each seed `n_per_seed` times, recording the visited points
/// (the seed itself is the first point).
pub fn poincare_section(
    seeds: &[(f64, f64)],
    kappa: f64,
    n_per_seed: u64,
) -> Result<Vec<Trajectory>> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("no Poincaré seeds given".into()));
    }
    if n_per_seed < 1 {
        return Err(Error::InvalidParameter(
            "n_per_seed must be at least 1".into(),
        ));
    }
    Ok(seeds
        .par_iter()
        .map(|&(theta, phi)| {
            let mut points = Vec::with_capacity(n_per_seed as usize);
            let mut s = ClassicalState::from_angles(theta, phi);
            for _ in 0..n_per_seed {
                points.push(s);
                s = classical_map(s, kappa);
            }
            Trajectory {
                points,
                kappa,
                theta0: theta,
                phi0: phi,
            }
        })
        .collect())
}
