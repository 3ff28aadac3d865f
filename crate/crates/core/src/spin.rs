//! Angular-momentum operators, rotations, spin-coherent states, and the
//! one-kick Floquet unitary for a spin j in the |j,m⟩ basis (m = j, j−1, …, −j,
//! ħ = 1).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest supported spin; dim = 2j+1 stays small enough for dense
/// eigendecompositions everywhere.
pub const MAX_SPIN: f64 = 50.0;

const HERMITICITY_LIMIT: f64 = 1e-8;
const UNITARITY_LIMIT: f64 = 1e-10;
const NORM_LIMIT: f64 = 1e-12;
const IMAG_RESIDUE_LIMIT: f64 = 1e-8;

/// A spin-j system: the basis dimension and the three angular-momentum
/// matrices.
#[derive(Clone, Debug)]
pub struct SpinSystem {
    j: f64,
    dim: usize,
    jx: CMatrix,
    jy: CMatrix,
    jz: CMatrix,
}

impl SpinSystem {
    /// Builds the operators for total spin `j` (positive half-integer).
    pub fn new(j: f64) -> Result<Self> {
        if !j.is_finite() {
            return Err(Error::InvalidSpin {
                j,
                reason: "j must be finite",
            });
        }
        let twice_j = (2.0 * j).round();
        if (2.0 * j - twice_j).abs() > 1e-9 {
            return Err(Error::InvalidSpin {
                j,
                reason: "2j must be an integer",
            });
        }
        if twice_j < 1.0 {
            return Err(Error::InvalidSpin {
                j,
                reason: "j must be at least 1/2",
            });
        }
        if j > MAX_SPIN {
            return Err(Error::InvalidSpin {
                j,
                reason: "j exceeds the supported dense-matrix range",
            });
        }
        let j = twice_j / 2.0;
        let dim = twice_j as usize + 1;

        // m = j - i on the diagonal, so |j,j⟩ is the first basis vector.
        let jz = CMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex64::new(j - r as f64, 0.0)
            } else {
                Complex64::ZERO
            }
        });

        // ⟨j,m+1|J₊|j,m⟩ = sqrt(j(j+1) − m(m+1)); column i holds m = j − i.
        let mut jp = CMatrix::zeros(dim, dim);
        for col in 1..dim {
            let m = j - col as f64;
            jp[(col - 1, col)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
        let jm = jp.adjoint();
        let jx = (&jp + &jm).scale(0.5);
        let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);

        Ok(Self { j, dim, jx, jy, jz })
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jx(&self) -> &CMatrix {
        &self.jx
    }

    pub fn jy(&self) -> &CMatrix {
        &self.jy
    }

    pub fn jz(&self) -> &CMatrix {
        &self.jz
    }

    /// One-kick Floquet unitary: the z² kick applied after the π/2 precession
    /// about y.
    pub fn floquet_operator(&self, kappa: f64) -> UnitaryMatrix {
        let kick_gen = (&self.jz * &self.jz).scale(kappa / (2.0 * self.j));
        let kick = expm_hermitian(&kick_gen, Complex64::new(0.0, -1.0))
            .expect("kick generator is Hermitian by construction");
        let rot_gen = self.jy.scale(std::f64::consts::FRAC_PI_2);
        let rot = expm_hermitian(&rot_gen, Complex64::new(0.0, -1.0))
            .expect("precession generator is Hermitian by construction");
        UnitaryMatrix {
            entries: kick.entries * rot.entries,
        }
    }

    /// Spin-coherent state |θ,φ⟩ = exp[iθ(Jx sinφ − Jy cosφ)] |j,j⟩.
    ///
    /// Out-of-range angles are wrapped onto θ ∈ [0,π], φ ∈ [−π,π) before the
    /// rotation is built, so equivalent angle pairs yield identical
    /// amplitudes.
    pub fn coherent_state(&self, theta: f64, phi: f64) -> QuantumState {
        let (theta, phi) = canonical_angles(theta, phi);
        let gen = (self.jx.scale(phi.sin()) - self.jy.scale(phi.cos())).scale(theta);
        let rot = expm_hermitian(&gen, Complex64::new(0.0, 1.0))
            .expect("coherent-state generator is Hermitian by construction");
        let amplitudes = rot.entries.column(0).into_owned();
        QuantumState { amplitudes }
    }

    /// Expectation vector (⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩).
    pub fn expectation_vector(&self, state: &QuantumState) -> Result<[f64; 3]> {
        Ok([
            expectation(state, &self.jx)?,
            expectation(state, &self.jy)?,
            expectation(state, &self.jz)?,
        ])
    }
}

/// Wraps (θ, φ) onto the canonical domain θ ∈ [0,π], φ ∈ [−π,π), preserving
/// the point on the sphere.
pub fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let mut t = theta.rem_euclid(2.0 * PI);
    let mut p = phi;
    if t > PI {
        t = 2.0 * PI - t;
        p += PI;
    }
    p = (p + PI).rem_euclid(2.0 * PI) - PI;
    (t, p)
}

/// A dim×dim unitary, produced by `expm_hermitian` or `floquet_operator`.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix {
    entries: CMatrix,
}

impl UnitaryMatrix {
    /// Wraps a matrix after checking U†U = 1 within 1e-10 elementwise.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let dev = unitarity_deviation(&entries);
        if dev > UNITARITY_LIMIT {
            return Err(Error::EigenResidual {
                residual: dev,
                limit: UNITARITY_LIMIT,
            });
        }
        Ok(Self { entries })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Applies the unitary once.
    pub fn apply(&self, state: &QuantumState) -> QuantumState {
        QuantumState {
            amplitudes: &self.entries * &state.amplitudes,
        }
    }
}

/// Max elementwise deviation of U†U from the identity.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    let dim = m.nrows();
    let mut dev: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            let target = if r == c { Complex64::ONE } else { Complex64::ZERO };
            dev = dev.max((gram[(r, c)] - target).norm());
        }
    }
    dev
}

/// Max elementwise deviation of `m` from its adjoint.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let dim = m.nrows();
    let mut dev: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            dev = dev.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    dev
}

/// exp(scale·H) for Hermitian H and unit-modulus `scale`, via the spectral
/// decomposition of H. Unconditionally stable at these dimensions.
pub fn expm_hermitian(h: &CMatrix, scale: Complex64) -> Result<UnitaryMatrix> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            got: h.ncols(),
        });
    }
    let dev = hermiticity_deviation(h);
    if dev > HERMITICITY_LIMIT {
        return Err(Error::NotHermitian {
            deviation: dev,
            limit: HERMITICITY_LIMIT,
        });
    }
    if (scale.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "scale must have modulus 1, got |scale| = {}",
            scale.norm()
        )));
    }
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let phases = CVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| (scale * l).exp()),
    );
    let mut scaled = eig.eigenvectors.clone();
    for (mut col, phase) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *phase;
    }
    let entries = scaled * eig.eigenvectors.adjoint();
    UnitaryMatrix::new(entries)
}

/// Normalized state vector in the |j,m⟩ basis.
#[derive(Clone, Debug)]
pub struct QuantumState {
    amplitudes: CVector,
}

impl QuantumState {
    /// Wraps an amplitude vector after checking unit norm within 1e-12.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_LIMIT {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_vector_unchecked(amplitudes: CVector) -> Self {
        Self { amplitudes }
    }

    /// Basis state |j,m⟩ for m = j − index.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[index] = Complex64::ONE;
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// ⟨ψ|M|ψ⟩ for Hermitian M; an imaginary residue at or above 1e-8 signals a
/// non-Hermitian M or a corrupted state and is reported as an error.
pub fn expectation(state: &QuantumState, m: &CMatrix) -> Result<f64> {
    if m.nrows() != state.dim() || m.ncols() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: m.nrows(),
        });
    }
    let value = state.amplitudes.dotc(&(m * &state.amplitudes));
    if value.im.abs() >= IMAG_RESIDUE_LIMIT {
        return Err(Error::ImaginaryResidue {
            residue: value.im.abs(),
            limit: IMAG_RESIDUE_LIMIT,
            context: "expectation value",
        });
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn max_dev(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn rejects_invalid_spins() {
        assert!(SpinSystem::new(0.0).is_err());
        assert!(SpinSystem::new(-1.0).is_err());
        assert!(SpinSystem::new(0.7).is_err());
        assert!(SpinSystem::new(f64::NAN).is_err());
        assert!(SpinSystem::new(0.5).is_ok());
        assert!(SpinSystem::new(1.5).is_ok());
    }

    #[test]
    fn spin_half_is_half_pauli() {
        let sys = SpinSystem::new(0.5).unwrap();
        assert_eq!(sys.dim(), 2);
        assert_abs_diff_eq!(sys.jz()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sys.jz()[(1, 1)].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sys.jx()[(0, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sys.jx()[(1, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sys.jy()[(0, 1)].im, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sys.jy()[(1, 0)].im, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn spin_one_matrix_elements() {
        let sys = SpinSystem::new(1.0).unwrap();
        assert_eq!(sys.dim(), 3);
        for (i, want) in [1.0, 0.0, -1.0].iter().enumerate() {
            assert_abs_diff_eq!(sys.jz()[(i, i)].re, want, epsilon = 1e-15);
        }
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert_abs_diff_eq!(sys.jx()[(0, 1)].re, inv_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(sys.jx()[(1, 2)].re, inv_sqrt2, epsilon = 1e-15);
    }

    #[test]
    fn algebra_invariants_across_spins() {
        for &j in &[0.5, 1.0, 1.5, 2.0, 2.5, 5.0] {
            let sys = SpinSystem::new(j).unwrap();
            let dim = sys.dim();
            assert!(hermiticity_deviation(sys.jx()) < 1e-12, "jx j={j}");
            assert!(hermiticity_deviation(sys.jy()) < 1e-12, "jy j={j}");
            assert!(hermiticity_deviation(sys.jz()) < 1e-12, "jz j={j}");

            let i = Complex64::new(0.0, 1.0);
            let comm_xy = sys.jx() * sys.jy() - sys.jy() * sys.jx();
            assert!(max_dev(&comm_xy, &(sys.jz() * i)) < 1e-10, "[jx,jy] j={j}");
            let comm_yz = sys.jy() * sys.jz() - sys.jz() * sys.jy();
            assert!(max_dev(&comm_yz, &(sys.jx() * i)) < 1e-10, "[jy,jz] j={j}");
            let comm_zx = sys.jz() * sys.jx() - sys.jx() * sys.jz();
            assert!(max_dev(&comm_zx, &(sys.jy() * i)) < 1e-10, "[jz,jx] j={j}");

            let casimir = sys.jx() * sys.jx() + sys.jy() * sys.jy() + sys.jz() * sys.jz();
            let expected = CMatrix::identity(dim, dim).scale(j * (j + 1.0));
            assert!(max_dev(&casimir, &expected) < 1e-10, "casimir j={j}");
        }
    }

    #[test]
    fn casimir_spin_three_halves() {
        let sys = SpinSystem::new(1.5).unwrap();
        let casimir = sys.jx() * sys.jx() + sys.jy() * sys.jy() + sys.jz() * sys.jz();
        let expected = CMatrix::identity(4, 4).scale(15.0 / 4.0);
        assert!(max_dev(&casimir, &expected) < 1e-12);
    }

    #[test]
    fn expm_zero_is_identity() {
        let h = CMatrix::zeros(3, 3);
        let u = expm_hermitian(&h, Complex64::new(0.0, -1.0)).unwrap();
        assert!(max_dev(u.matrix(), &CMatrix::identity(3, 3)) < 1e-14);
    }

    #[test]
    fn expm_pi_rotation_flips_spin_half() {
        let sys = SpinSystem::new(0.5).unwrap();
        let h = sys.jy().scale(PI);
        let u = expm_hermitian(&h, Complex64::new(0.0, -1.0)).unwrap();
        let up = QuantumState::basis_state(2, 0);
        let flipped = u.apply(&up);
        // |1/2,1/2⟩ → |1/2,−1/2⟩ up to phase.
        assert!(flipped.amplitudes()[0].norm() < 1e-12);
        assert_abs_diff_eq!(flipped.amplitudes()[1].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn expm_diagonal_kick_spin_one() {
        let sys = SpinSystem::new(1.0).unwrap();
        let kappa = 2.5;
        let h = (sys.jz() * sys.jz()).scale(kappa / 2.0);
        let u = expm_hermitian(&h, Complex64::new(0.0, -1.0)).unwrap();
        let phase = Complex64::new(0.0, -1.25).exp();
        let expected = CMatrix::from_diagonal(&CVector::from_vec(vec![
            phase,
            Complex64::ONE,
            phase,
        ]));
        assert!(max_dev(u.matrix(), &expected) < 1e-12);
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = Complex64::new(1.0, 0.0);
        let err = expm_hermitian(&h, Complex64::new(0.0, -1.0)).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn floquet_kappa_zero_is_pure_rotation() {
        for &j in &[0.5, 1.0, 2.0] {
            let sys = SpinSystem::new(j).unwrap();
            let u = sys.floquet_operator(0.0);
            let rot = expm_hermitian(&sys.jy().scale(PI / 2.0), Complex64::new(0.0, -1.0)).unwrap();
            assert!(max_dev(u.matrix(), rot.matrix()) < 1e-12, "j={j}");
        }
    }

    #[test]
    fn floquet_unitarity_random_kappa() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &j in &[0.5, 1.0, 1.5, 3.0] {
            let sys = SpinSystem::new(j).unwrap();
            for _ in 0..100 {
                let kappa: f64 = rng.random_range(0.0..8.0 * PI);
                let u = sys.floquet_operator(kappa);
                assert!(
                    unitarity_deviation(u.matrix()) < 1e-10,
                    "j={j}, kappa={kappa}"
                );
            }
        }
    }

    #[test]
    fn floquet_period_eight_pi_spin_one() {
        let sys = SpinSystem::new(1.0).unwrap();
        for &kappa in &[0.3, 2.5, 5.9] {
            let a = sys.floquet_operator(kappa);
            let b = sys.floquet_operator(kappa + 8.0 * PI);
            assert!(max_dev(a.matrix(), b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn coherent_state_at_north_pole() {
        let sys = SpinSystem::new(1.5).unwrap();
        let state = sys.coherent_state(0.0, 0.7);
        assert_abs_diff_eq!(state.amplitudes()[0].re, 1.0, epsilon = 1e-14);
        for k in 1..4 {
            assert!(state.amplitudes()[k].norm() < 1e-14);
        }
    }

    #[test]
    fn coherent_state_on_equator() {
        let sys = SpinSystem::new(1.0).unwrap();
        let state = sys.coherent_state(PI / 2.0, 0.0);
        let v = sys.expectation_vector(&state).unwrap();
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_centroid_spin_three_halves() {
        let sys = SpinSystem::new(1.5).unwrap();
        let (theta, phi) = (1.2, 0.3);
        let state = sys.coherent_state(theta, phi);
        let v = sys.expectation_vector(&state).unwrap();
        let j = sys.j();
        assert_abs_diff_eq!(v[0] / j, theta.sin() * phi.cos(), epsilon = 1e-10);
        assert_abs_diff_eq!(v[1] / j, theta.sin() * phi.sin(), epsilon = 1e-10);
        assert_abs_diff_eq!(v[2] / j, theta.cos(), epsilon = 1e-10);
    }

    #[test]
    fn coherent_centroid_random_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &j in &[0.5, 1.0, 1.5, 2.5] {
            let sys = SpinSystem::new(j).unwrap();
            for _ in 0..100 {
                let theta: f64 = rng.random_range(0.0..PI);
                let phi: f64 = rng.random_range(-PI..PI);
                let state = sys.coherent_state(theta, phi);
                let v = sys.expectation_vector(&state).unwrap();
                assert_abs_diff_eq!(v[0] / j, theta.sin() * phi.cos(), epsilon = 1e-10);
                assert_abs_diff_eq!(v[1] / j, theta.sin() * phi.sin(), epsilon = 1e-10);
                assert_abs_diff_eq!(v[2] / j, theta.cos(), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn coherent_state_norm_not_renormalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let sys = SpinSystem::new(2.0).unwrap();
        for _ in 0..50 {
            let theta: f64 = rng.random_range(0.0..PI);
            let phi: f64 = rng.random_range(-PI..PI);
            let state = sys.coherent_state(theta, phi);
            assert!((state.norm_squared() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coherent_state_angle_wrapping() {
        let sys = SpinSystem::new(1.5).unwrap();
        let (theta, phi) = (1.2, 0.3);
        let base = sys.coherent_state(theta, phi);
        // Same sphere point, shifted or reflected coordinates.
        for state in [
            sys.coherent_state(theta + 2.0 * PI, phi),
            sys.coherent_state(-theta, phi + PI),
            sys.coherent_state(2.0 * PI - theta, phi + PI),
            sys.coherent_state(theta, phi + 2.0 * PI),
        ] {
            let dev: f64 = (state.amplitudes() - base.amplitudes())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-14, "dev={dev}");
        }
    }

    #[test]
    fn expectation_basis_cases() {
        let sys = SpinSystem::new(2.5).unwrap();
        let top = QuantumState::basis_state(sys.dim(), 0);
        assert_abs_diff_eq!(expectation(&top, sys.jz()).unwrap(), 2.5, epsilon = 1e-14);
        assert_abs_diff_eq!(expectation(&top, sys.jx()).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn expectation_coherent_jy() {
        let sys = SpinSystem::new(1.0).unwrap();
        let state = sys.coherent_state(1.2, 0.3);
        let want = 1.2_f64.sin() * 0.3_f64.sin();
        assert_abs_diff_eq!(expectation(&state, sys.jy()).unwrap(), want, epsilon = 1e-10);
    }

    #[test]
    fn expectation_flags_imaginary_residue() {
        let state = QuantumState::new(CVector::from_vec(vec![
            Complex64::new(0.5_f64.sqrt(), 0.0),
            Complex64::new(0.0, 0.5_f64.sqrt()),
        ]))
        .unwrap();
        // Strictly upper-triangular matrix: ⟨M⟩ picks up a finite imaginary part.
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::ONE;
        let err = expectation(&state, &m).unwrap_err();
        assert!(matches!(err, Error::ImaginaryResidue { .. }));
    }

    #[test]
    fn quantum_state_rejects_unnormalized() {
        let v = CVector::from_vec(vec![Complex64::new(0.9, 0.0), Complex64::ZERO]);
        assert!(matches!(
            QuantumState::new(v),
            Err(Error::NotNormalized { .. })
        ));
    }
}
