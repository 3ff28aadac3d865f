//! Periodic-orbit search: Newton iteration on F^p(s) − s in the (θ, φ)
//! parametrization of the sphere, seeded from a coarse grid.

use nalgebra::{Matrix2, Matrix3, Matrix3x2, Vector2};

use super::{classical_jacobian, classical_map, ClassicalState, TangentVector};
use crate::error::{Error, Result};

const MAX_NEWTON_STEPS: usize = 50;
const NEWTON_TOL: f64 = 1e-12;
const ROOT_RESIDUAL: f64 = 1e-10;
const DEDUP_DISTANCE: f64 = 1e-6;
const MAX_STEP: f64 = 0.5;
/// Cycle multipliers at or below 1 + this margin count as stable.
const STABILITY_MARGIN: f64 = 1e-9;

/// A periodic orbit of the classical map.
#[derive(Clone, Debug)]
pub struct PeriodicOrbit {
    /// The minimal-period cycle, starting from the representative point.
    pub cycle: Vec<ClassicalState>,
    pub minimal_period: usize,
    /// Spectral radius of the tangent map around the full cycle.
    pub multiplier: f64,
    pub stable: bool,
}

impl PeriodicOrbit {
    pub fn representative(&self) -> ClassicalState {
        self.cycle[0]
    }
}

/// Finds periodic orbits of period dividing `period` by Newton iteration from
/// a cell-centered seed grid; converged roots are deduplicated up to cycle
/// equivalence and labeled by minimal period and stability. Seeds that fail
/// to converge within 50 steps are discarded.
pub fn find_periodic_orbits(
    kappa: f64,
    period: usize,
    n_theta_seeds: usize,
    n_phi_seeds: usize,
) -> Result<Vec<PeriodicOrbit>> {
    if !(1..=8).contains(&period) {
        return Err(Error::InvalidParameter(format!(
            "period must be in 1..=8, got {period}"
        )));
    }
    if n_theta_seeds == 0 || n_phi_seeds == 0 {
        return Err(Error::InvalidParameter("empty seed grid".into()));
    }

    use std::f64::consts::PI;
    let mut roots: Vec<ClassicalState> = Vec::new();
    for i in 0..n_theta_seeds {
        for k in 0..n_phi_seeds {
            let theta = (i as f64 + 0.5) * PI / n_theta_seeds as f64;
            let phi = -PI + (k as f64 + 0.5) * 2.0 * PI / n_phi_seeds as f64;
            if let Some(root) = newton_root(kappa, period, theta, phi) {
                let cycle = orbit_cycle(root, kappa, period);
                if !roots
                    .iter()
                    .any(|&r| cycles_equivalent(&orbit_cycle(r, kappa, period), &cycle))
                {
                    roots.push(root);
                }
            }
        }
    }

    let mut orbits: Vec<PeriodicOrbit> = roots
        .into_iter()
        .map(|root| {
            let minimal_period = minimal_period(root, kappa, period);
            let cycle = canonical_cycle(root, kappa, minimal_period);
            let multiplier = cycle_multiplier(&cycle, kappa);
            PeriodicOrbit {
                stable: multiplier <= 1.0 + STABILITY_MARGIN,
                cycle,
                minimal_period,
                multiplier,
            }
        })
        .collect();
    orbits.sort_by(|a, b| {
        let (ta, pa) = a.cycle[0].angles();
        let (tb, pb) = b.cycle[0].angles();
        a.minimal_period
            .cmp(&b.minimal_period)
            .then(ta.total_cmp(&tb))
            .then(pa.total_cmp(&pb))
    });
    Ok(orbits)
}

fn iterate(mut s: ClassicalState, kappa: f64, n: usize) -> ClassicalState {
    for _ in 0..n {
        s = classical_map(s, kappa);
    }
    s
}

/// Jacobian of F^p along the orbit from `s`.
fn cycle_jacobian(s: ClassicalState, kappa: f64, p: usize) -> Matrix3<f64> {
    let mut m = Matrix3::identity();
    let mut point = s;
    for _ in 0..p {
        m = classical_jacobian(point, kappa) * m;
        point = classical_map(point, kappa);
    }
    m
}

/// ∂(sinθcosφ, sinθsinφ, cosθ)/∂(θ, φ).
fn embedding_jacobian(theta: f64, phi: f64) -> Matrix3x2<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Matrix3x2::new(ct * cp, -st * sp, ct * sp, st * cp, -st, 0.0)
}

fn newton_root(kappa: f64, period: usize, theta0: f64, phi0: f64) -> Option<ClassicalState> {
    let mut u = Vector2::new(theta0, phi0);
    for _ in 0..MAX_NEWTON_STEPS {
        let s = ClassicalState::from_angles(u.x, u.y);
        let g = iterate(s, kappa, period).as_vector() - s.as_vector();
        if g.amax() < NEWTON_TOL {
            return (iterate(s, kappa, period).as_vector() - s.as_vector()).amax()
                .le(&ROOT_RESIDUAL)
                .then_some(s);
        }
        let t = embedding_jacobian(u.x, u.y);
        let m = cycle_jacobian(s, kappa, period) * t - t;
        // Least-squares Newton step; the pseudo-inverse also covers the rank
        // loss of the parametrization at the poles.
        let svd = m.svd(true, true);
        let mut delta = match svd.solve(&(-g), 1e-12) {
            Ok(d) => d,
            Err(_) => return None,
        };
        let step = delta.norm();
        if step > MAX_STEP {
            delta *= MAX_STEP / step;
        }
        u += delta;
    }
    None
}

fn orbit_cycle(s: ClassicalState, kappa: f64, p: usize) -> Vec<ClassicalState> {
    let mut cycle = Vec::with_capacity(p);
    let mut point = s;
    for _ in 0..p {
        cycle.push(point);
        point = classical_map(point, kappa);
    }
    cycle
}

fn point_distance(a: ClassicalState, b: ClassicalState) -> f64 {
    (a.as_vector() - b.as_vector()).norm()
}

fn cycles_equivalent(a: &[ClassicalState], b: &[ClassicalState]) -> bool {
    a.iter()
        .any(|&pa| b.iter().any(|&pb| point_distance(pa, pb) < DEDUP_DISTANCE))
}

fn minimal_period(s: ClassicalState, kappa: f64, p: usize) -> usize {
    for d in 1..=p {
        if p % d == 0 && point_distance(iterate(s, kappa, d), s) < 1e-9 {
            return d;
        }
    }
    p
}

/// Minimal-period cycle rotated so the point with the smallest (θ, φ) comes
/// first, keeping output independent of which seed converged.
fn canonical_cycle(s: ClassicalState, kappa: f64, minimal: usize) -> Vec<ClassicalState> {
    let cycle = orbit_cycle(s, kappa, minimal);
    let start = cycle
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            let (ta, pa) = a.angles();
            let (tb, pb) = b.angles();
            ta.total_cmp(&tb).then(pa.total_cmp(&pb))
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut rotated = Vec::with_capacity(minimal);
    rotated.extend_from_slice(&cycle[start..]);
    rotated.extend_from_slice(&cycle[..start]);
    rotated
}

/// Spectral radius of the cycle's tangent monodromy, restricted to the
/// tangent plane of the representative point.
fn cycle_multiplier(cycle: &[ClassicalState], kappa: f64) -> f64 {
    let s = cycle[0];
    let monodromy = cycle_jacobian(s, kappa, cycle.len());
    let t1 = TangentVector::seed(&s).as_vector();
    let t2 = s.as_vector().cross(&t1);
    let mt1 = monodromy * t1;
    let mt2 = monodromy * t2;
    let m2 = Matrix2::new(t1.dot(&mt1), t1.dot(&mt2), t2.dot(&mt1), t2.dot(&mt2));
    let trace = m2.trace();
    let det = m2.determinant();
    let disc = trace * trace / 4.0 - det;
    if disc >= 0.0 {
        let root = disc.sqrt();
        (trace / 2.0 + root).abs().max((trace / 2.0 - root).abs())
    } else {
        // Complex pair: |λ|² = det.
        det.max(0.0).sqrt()
    }
}
