//! Eigendecomposition of the one-kick unitary and the resonance expansion of
//! the infinite-time-averaged entanglement into diagonal (I_Q) and
//! off-diagonal (R_Q) parts.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::analysis::grid::{FieldMap, FieldParams, ThetaPhiGrid};
use crate::error::{Error, Result};
use crate::spin::{CMatrix, CVector, QuantumState, SpinSystem, UnitaryMatrix};

/// Default phase tolerance (rad) for the resonance condition
/// ξ_k* ξ_l ξ_p* ξ_q = 1.
pub const DEFAULT_RESONANCE_TOL: f64 = 1e-9;

const EIGEN_RESIDUAL_LIMIT: f64 = 1e-8;
/// Eigenphases closer than this (rad) are treated as one degenerate cluster.
const PHASE_CLUSTER_TOL: f64 = 1e-8;
/// Clustering tolerance on the eigenvalues of (U + U†)/2.
const COS_CLUSTER_TOL: f64 = 1e-8;
const SUM_IMAG_LIMIT: f64 = 1e-9;

/// Wraps a phase into (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut w = x.rem_euclid(two_pi);
    if w > PI {
        w -= two_pi;
    }
    w
}

/// Circular distance between two phases.
fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Eigenphases and eigenvectors of the one-kick unitary, sorted by eigenphase
/// ascending in (−π, π].
#[derive(Clone, Debug)]
pub struct FloquetDecomposition {
    eigenphases: Vec<f64>,
    eigenvectors: CMatrix,
    kappa: f64,
}

impl FloquetDecomposition {
    /// Decomposes the Floquet operator of `sys` at kick strength `kappa`.
    ///
    /// For j = 1 the eigenphases are snapped onto the analytically known set
    /// {e^{−iκ/2}, −i e^{−iκ/4}, i e^{−iκ/4}}, which makes the resonance
    /// condition exact for the two-qubit top.
    pub fn new(sys: &SpinSystem, kappa: f64) -> Result<Self> {
        let u = sys.floquet_operator(kappa);
        let mut dec = floquet_decompose(&u, kappa)?;
        if sys.j() == 1.0 {
            dec.snap_to_two_qubit_phases()?;
        }
        Ok(dec)
    }

    pub fn dim(&self) -> usize {
        self.eigenphases.len()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn eigenphases(&self) -> &[f64] {
        &self.eigenphases
    }

    /// Eigenvectors as matrix columns, aligned with `eigenphases`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// ξ_k = e^{iα_k}.
    pub fn eigenvalue(&self, k: usize) -> Complex64 {
        Complex64::new(0.0, self.eigenphases[k]).exp()
    }

    /// Eigenstate k as a quantum state.
    pub fn eigenstate(&self, k: usize) -> QuantumState {
        QuantumState::from_vector_unchecked(self.eigenvectors.column(k).into_owned())
    }

    /// Expansion coefficients C_k = ⟨ξ_k|ψ⟩.
    pub fn coefficients(&self, state: &QuantumState) -> CVector {
        self.eigenvectors.adjoint() * state.amplitudes()
    }

    /// |ψ(n)⟩ = Σ_k ξ_k^n ⟨ξ_k|ψ(0)⟩ |ξ_k⟩, evaluated in the eigenbasis.
    pub fn evolve_spectral(&self, state: &QuantumState, n: u64) -> QuantumState {
        let mut coeffs = self.coefficients(state);
        for (c, &alpha) in coeffs.iter_mut().zip(self.eigenphases.iter()) {
            *c *= Complex64::new(0.0, alpha * n as f64).exp();
        }
        QuantumState::from_vector_unchecked(&self.eigenvectors * coeffs)
    }

    /// Σ_k ξ_k v_k v_k†, which must reproduce the decomposed unitary.
    pub fn reconstruction(&self) -> CMatrix {
        let dim = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (mut col, &alpha) in scaled.column_iter_mut().zip(self.eigenphases.iter()) {
            col *= Complex64::new(0.0, alpha).exp();
        }
        let mut out = CMatrix::zeros(dim, dim);
        out.gemm(
            Complex64::ONE,
            &scaled,
            &self.eigenvectors.adjoint(),
            Complex64::ZERO,
        );
        out
    }

    /// The analytically known two-qubit eigenphases at kick strength `kappa`,
    /// wrapped into (−π, π].
    pub fn two_qubit_eigenphases(kappa: f64) -> [f64; 3] {
        [
            wrap_phase(-kappa / 2.0),
            wrap_phase(-PI / 2.0 - kappa / 4.0),
            wrap_phase(PI / 2.0 - kappa / 4.0),
        ]
    }

    fn snap_to_two_qubit_phases(&mut self) -> Result<()> {
        let analytic = Self::two_qubit_eigenphases(self.kappa);
        for phase in &mut self.eigenphases {
            let (best, dist) = analytic
                .iter()
                .map(|&a| (a, phase_distance(*phase, a)))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("three analytic phases");
            if dist > DEFAULT_RESONANCE_TOL {
                return Err(Error::EigenResidual {
                    residual: dist,
                    limit: DEFAULT_RESONANCE_TOL,
                });
            }
            *phase = best;
        }
        for &a in &analytic {
            let covered = self
                .eigenphases
                .iter()
                .any(|&p| phase_distance(p, a) <= DEFAULT_RESONANCE_TOL);
            if !covered {
                return Err(Error::EigenResidual {
                    residual: f64::INFINITY,
                    limit: DEFAULT_RESONANCE_TOL,
                });
            }
        }
        self.sort_by_phase();
        Ok(())
    }

    fn sort_by_phase(&mut self) {
        let dim = self.dim();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| self.eigenphases[a].total_cmp(&self.eigenphases[b]));
        let phases: Vec<f64> = order.iter().map(|&i| self.eigenphases[i]).collect();
        let mut vectors = CMatrix::zeros(dim, dim);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &self.eigenvectors.column(src));
        }
        self.eigenphases = phases;
        self.eigenvectors = vectors;
    }
}

/// Diagonalizes a unitary via the commuting Hermitian pair
/// A = (U + U†)/2, B = (U − U†)/2i: eigenspaces of A are U-invariant, and
/// diagonalizing B inside each resolves the ±α ambiguity. Degenerate
/// eigenphase clusters are re-orthonormalized jointly.
pub fn floquet_decompose(u: &UnitaryMatrix, kappa: f64) -> Result<FloquetDecomposition> {
    let m = u.matrix();
    let dim = m.nrows();
    let adj = m.adjoint();
    let a = (m + &adj).scale(0.5);
    let b = (m - &adj) * Complex64::new(0.0, -0.5);

    let eig_a = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| eig_a.eigenvalues[x].total_cmp(&eig_a.eigenvalues[y]));

    // Group A-eigenvalues into clusters; each cluster spans a U-invariant
    // subspace on which B (restricted) separates the eigenphases.
    let mut vectors: Vec<CVector> = Vec::with_capacity(dim);
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim
            && eig_a.eigenvalues[order[end]] - eig_a.eigenvalues[order[end - 1]] <= COS_CLUSTER_TOL
        {
            end += 1;
        }
        let span = end - start;
        let mut basis = CMatrix::zeros(dim, span);
        for (col, &idx) in order[start..end].iter().enumerate() {
            basis.set_column(col, &eig_a.eigenvectors.column(idx));
        }
        if span == 1 {
            vectors.push(basis.column(0).into_owned());
        } else {
            let restricted = basis.adjoint() * &b * &basis;
            let eig_b = SymmetricEigen::new(restricted);
            let mut sub_order: Vec<usize> = (0..span).collect();
            sub_order.sort_by(|&x, &y| eig_b.eigenvalues[x].total_cmp(&eig_b.eigenvalues[y]));
            for &idx in &sub_order {
                let w = eig_b.eigenvectors.column(idx);
                vectors.push(&basis * w.into_owned());
            }
        }
        start = end;
    }

    // Rayleigh quotients give the eigenphases.
    let mut pairs: Vec<(f64, CVector)> = vectors
        .into_iter()
        .map(|v| {
            let xi = v.dotc(&(m * &v));
            (xi.arg(), v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Joint re-orthonormalization inside degenerate eigenphase clusters
    // (circular, so a cluster may wrap across ±π).
    let mut cluster_of = vec![0usize; dim];
    let mut n_clusters = 0usize;
    for i in 0..dim {
        if i > 0 && (pairs[i].0 - pairs[i - 1].0).abs() <= PHASE_CLUSTER_TOL {
            cluster_of[i] = cluster_of[i - 1];
        } else {
            cluster_of[i] = n_clusters;
            n_clusters += 1;
        }
    }
    if dim > 1 && n_clusters > 1 && phase_distance(pairs[dim - 1].0, pairs[0].0) <= PHASE_CLUSTER_TOL
    {
        let last = cluster_of[dim - 1];
        for c in cluster_of.iter_mut() {
            if *c == last {
                *c = 0;
            }
        }
    }
    for cluster in 0..n_clusters {
        let members: Vec<usize> = (0..dim).filter(|&i| cluster_of[i] == cluster).collect();
        if members.len() < 2 {
            continue;
        }
        for (pos, &i) in members.iter().enumerate() {
            for &k in &members[..pos] {
                let proj = pairs[k].1.dotc(&pairs[i].1);
                let correction = pairs[k].1.clone() * proj;
                pairs[i].1 -= correction;
            }
            let norm = pairs[i].1.norm();
            pairs[i].1 /= Complex64::new(norm, 0.0);
        }
    }

    let eigenphases: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut eigenvectors = CMatrix::zeros(dim, dim);
    for (col, (_, v)) in pairs.iter().enumerate() {
        eigenvectors.set_column(col, v);
    }

    // Residual and orthonormality checks.
    let mut residual: f64 = 0.0;
    for k in 0..dim {
        let v = eigenvectors.column(k);
        let lhs = m * v;
        let xi = Complex64::new(0.0, eigenphases[k]).exp();
        for i in 0..dim {
            residual = residual.max((lhs[i] - xi * v[i]).norm());
        }
    }
    let gram_dev = crate::spin::unitarity_deviation(&eigenvectors);
    if residual > EIGEN_RESIDUAL_LIMIT || gram_dev > EIGEN_RESIDUAL_LIMIT {
        return Err(Error::EigenResidual {
            residual: residual.max(gram_dev),
            limit: EIGEN_RESIDUAL_LIMIT,
        });
    }

    Ok(FloquetDecomposition {
        eigenphases,
        eigenvectors,
        kappa,
    })
}

/// Index quadruples (k, l, p, q) whose eigenphase combination cancels, i.e.
/// ξ_k* ξ_l ξ_p* ξ_q = 1 within the phase tolerance.
#[derive(Clone, Debug)]
pub struct ResonanceSet {
    quadruples: Vec<[usize; 4]>,
    tolerance: f64,
}

impl ResonanceSet {
    pub fn quadruples(&self) -> &[[usize; 4]] {
        &self.quadruples
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.quadruples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quadruples.is_empty()
    }

    /// The (k,k,q,q) family, whose sum yields I_Q.
    pub fn diagonal(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        self.quadruples.iter().copied().filter(|q| is_diagonal(*q))
    }

    /// Resonant quadruples outside the diagonal family; their sum yields R_Q.
    pub fn off_diagonal(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        self.quadruples.iter().copied().filter(|q| !is_diagonal(*q))
    }

    pub fn contains(&self, quad: [usize; 4]) -> bool {
        // Enumeration order is lexicographic.
        self.quadruples.binary_search(&quad).is_ok()
    }

    #[cfg(test)]
    pub(crate) fn from_raw_parts(quadruples: Vec<[usize; 4]>, tolerance: f64) -> Self {
        Self {
            quadruples,
            tolerance,
        }
    }
}

/// (k,k,q,q)?
pub fn is_diagonal(quad: [usize; 4]) -> bool {
    quad[0] == quad[1] && quad[2] == quad[3]
}

/// E(k,l,p,q)* = E(l,k,q,p).
pub fn conjugate_quadruple(quad: [usize; 4]) -> [usize; 4] {
    [quad[1], quad[0], quad[3], quad[2]]
}

/// Exhaustively enumerates all dim⁴ quadruples and keeps the resonant ones.
pub fn resonant_quadruples(dec: &FloquetDecomposition, tolerance: f64) -> Result<ResonanceSet> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resonance tolerance must be positive, got {tolerance}"
        )));
    }
    let phases = dec.eigenphases();
    let dim = phases.len();
    let mut quadruples = Vec::new();
    for k in 0..dim {
        for l in 0..dim {
            for p in 0..dim {
                for q in 0..dim {
                    let delta = wrap_phase(phases[l] + phases[q] - phases[k] - phases[p]);
                    if delta.abs() <= tolerance {
                        quadruples.push([k, l, p, q]);
                    }
                }
            }
        }
    }
    Ok(ResonanceSet {
        quadruples,
        tolerance,
    })
}

/// S_Q and its diagonal/off-diagonal split. S_Q = I_Q + R_Q holds exactly by
/// construction.
#[derive(Clone, Copy, Debug)]
pub struct EntropyAverages {
    pub s_q: f64,
    pub i_q: f64,
    pub r_q: f64,
}

/// Precomputed machinery for evaluating the resonance expansion at many
/// initial conditions: the angular-momentum matrices in the Floquet eigenbasis
/// and the per-quadruple weights W = Σ_i ⟨ξ_k|J_i|ξ_l⟩⟨ξ_p|J_i|ξ_q⟩.
pub struct EntropyExpansion {
    j: f64,
    eigenvectors: CMatrix,
    j_eig: [CMatrix; 3],
    diagonal: Vec<([usize; 4], Complex64)>,
    off_diagonal: Vec<([usize; 4], Complex64)>,
}

impl EntropyExpansion {
    pub fn new(
        sys: &SpinSystem,
        dec: &FloquetDecomposition,
        resonances: &ResonanceSet,
    ) -> Result<Self> {
        if sys.dim() != dec.dim() {
            return Err(Error::DimensionMismatch {
                expected: sys.dim(),
                got: dec.dim(),
            });
        }
        let v = dec.eigenvectors();
        let vh = v.adjoint();
        let j_eig = [
            &vh * sys.jx() * v,
            &vh * sys.jy() * v,
            &vh * sys.jz() * v,
        ];
        let weight = |quad: &[usize; 4]| -> Complex64 {
            let [k, l, p, q] = *quad;
            j_eig
                .iter()
                .map(|m| m[(k, l)] * m[(p, q)])
                .sum()
        };
        let mut diagonal = Vec::new();
        let mut off_diagonal = Vec::new();
        for quad in resonances.quadruples() {
            let w = weight(quad);
            if is_diagonal(*quad) {
                diagonal.push((*quad, w));
            } else {
                off_diagonal.push((*quad, w));
            }
        }
        Ok(Self {
            j: sys.j(),
            eigenvectors: v.clone(),
            j_eig,
            diagonal,
            off_diagonal,
        })
    }

    /// C_k = ⟨ξ_k|ψ⟩.
    pub fn coefficients(&self, state: &QuantumState) -> CVector {
        self.eigenvectors.adjoint() * state.amplitudes()
    }

    /// E(k,l,p,q) for one quadruple at the given coefficients.
    pub fn eterm(&self, quad: [usize; 4], coeffs: &CVector) -> Complex64 {
        let [k, l, p, q] = quad;
        let w: Complex64 = self.j_eig.iter().map(|m| m[(k, l)] * m[(p, q)]).sum();
        coeffs[k].conj() * coeffs[l] * coeffs[p].conj() * coeffs[q] * w
    }

    pub fn averages_for_state(&self, state: &QuantumState) -> Result<EntropyAverages> {
        let c = self.coefficients(state);
        let mut diag_sum = Complex64::ZERO;
        for ([k, _, p, _], w) in &self.diagonal {
            diag_sum += c[*k].norm_sqr() * c[*p].norm_sqr() * w;
        }
        let mut off_sum = Complex64::ZERO;
        for ([k, l, p, q], w) in &self.off_diagonal {
            off_sum += c[*k].conj() * c[*l] * c[*p].conj() * c[*q] * w;
        }
        for (sum, context) in [
            (diag_sum, "diagonal resonant sum"),
            (off_sum, "off-diagonal resonant sum"),
        ] {
            if sum.im.abs() >= SUM_IMAG_LIMIT {
                return Err(Error::ImaginaryResidue {
                    residue: sum.im.abs(),
                    limit: SUM_IMAG_LIMIT,
                    context,
                });
            }
        }
        let denom = 2.0 * self.j * self.j;
        let i_q = 0.5 - diag_sum.re / denom;
        let r_q = -off_sum.re / denom;
        Ok(EntropyAverages {
            s_q: i_q + r_q,
            i_q,
            r_q,
        })
    }

    /// Averages for the coherent state at (θ, φ).
    pub fn averages(&self, sys: &SpinSystem, theta: f64, phi: f64) -> Result<EntropyAverages> {
        self.averages_for_state(&sys.coherent_state(theta, phi))
    }
}

/// (S_Q, I_Q, R_Q) for the coherent state at (θ, φ), via exact resonance
/// enumeration at the default tolerance.
pub fn infinite_time_average_entropy(
    sys: &SpinSystem,
    dec: &FloquetDecomposition,
    theta: f64,
    phi: f64,
) -> Result<EntropyAverages> {
    let resonances = resonant_quadruples(dec, DEFAULT_RESONANCE_TOL)?;
    let expansion = EntropyExpansion::new(sys, dec, &resonances)?;
    expansion.averages(sys, theta, phi)
}

/// Real-valued map of Σ E(k,l,p,q) over a quadruple group, evaluated on a
/// grid of initial conditions. The group must be closed under conjugation
/// (k,l,p,q) ↔ (l,k,q,p) so the sum is real.
pub fn eterm_map(
    sys: &SpinSystem,
    dec: &FloquetDecomposition,
    group: &[[usize; 4]],
    grid: &ThetaPhiGrid,
) -> Result<FieldMap> {
    if group.is_empty() {
        return Err(Error::InvalidParameter("empty quadruple group".into()));
    }
    let dim = dec.dim();
    for quad in group {
        if quad.iter().any(|&i| i >= dim) {
            return Err(Error::InvalidParameter(format!(
                "quadruple {quad:?} out of range for dimension {dim}"
            )));
        }
        if !group.contains(&conjugate_quadruple(*quad)) {
            return Err(Error::GroupNotConjugationClosed { quad: *quad });
        }
    }
    let resonances = resonant_quadruples(dec, DEFAULT_RESONANCE_TOL)?;
    let expansion = EntropyExpansion::new(sys, dec, &resonances)?;

    let results: Vec<Result<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (theta, phi) = grid.point(idx);
            let coeffs = expansion.coefficients(&sys.coherent_state(theta, phi));
            let sum: Complex64 = group.iter().map(|&q| expansion.eterm(q, &coeffs)).sum();
            if sum.im.abs() >= SUM_IMAG_LIMIT {
                return Err(Error::ImaginaryResidue {
                    residue: sum.im.abs(),
                    limit: SUM_IMAG_LIMIT,
                    context: "quadruple-group sum",
                });
            }
            Ok(sum.re)
        })
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for r in results {
        values.push(r?);
    }
    FieldMap::new(
        grid.clone(),
        values,
        "eterm",
        FieldParams {
            j: Some(sys.j()),
            kappa: Some(dec.kappa()),
            quadruples: Some(group.to_vec()),
            ..FieldParams::default()
        },
    )
}
