// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact time evolution under piecewise-constant controls.
//!
//! Two paths, one convention:
//!
//! - Dense: [`segment_unitary`] exponentiates the segment Hamiltonian by
//!   Hermitian eigendecomposition (the reference method). Segments with
//!   `Ω = 0` are diagonal and are exponentiated entry-wise.
//! - Matrix-free: [`evolve_state`] propagates a state through a sequence
//!   without ever forming the unitary, using Lanczos/Krylov steps. This is
//!   the only path above [`DENSE_QUBIT_CAP`](crate::DENSE_QUBIT_CAP) qubits.
//!
//! Time ordering is global to the crate: the first-in-time segment is the
//! rightmost factor, `U_seq = U_k · … · U_2 · U_1`.
//!
//! Global phases are never stripped here; phase invariance is the metrics
//! module's job.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::linalg::{self, CMat, CVec};
use crate::register::{hamiltonian, diagonal_energies, PulseSegment, PulseSequence, RegisterSpec};
use crate::{Error, Result, STATE_QUBIT_CAP};

/// Dense unitary on a 2^N-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    mat: CMat,
}

impl Unitary {
    /// Wraps a matrix, checking dimension and unitarity (‖U†U − I‖_F < 1e−9).
    pub fn new(mat: CMat) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c || !r.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square with power-of-two dimension, got {r}x{c}"
            )));
        }
        let defect = linalg::fro_norm(&(linalg::dagger(&mat).dot(&mat) - linalg::eye(r)));
        if defect > 1e-9 {
            return Err(Error::Numerics(format!(
                "matrix is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_mat_unchecked(mat: CMat) -> Self {
        debug_assert!({
            let n = mat.nrows();
            linalg::fro_norm(&(linalg::dagger(&mat).dot(&mat) - linalg::eye(n))) < 1e-9
        });
        Self { mat }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { mat: linalg::eye(1 << n_qubits) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.mat.nrows().trailing_zeros() as usize
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// `self · rhs` (rhs acts first).
    pub fn compose(&self, rhs: &Unitary) -> Result<Unitary> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose unitaries of dimension {} and {}",
                self.dim(),
                rhs.dim()
            )));
        }
        Ok(Unitary::from_mat_unchecked(self.mat.dot(&rhs.mat)))
    }

    pub fn dagger(&self) -> Unitary {
        Unitary::from_mat_unchecked(linalg::dagger(&self.mat))
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary dim {} vs state dim {}",
                self.dim(),
                psi.dim()
            )));
        }
        Ok(StateVector::from_amplitudes_unchecked(self.mat.dot(&psi.amps)))
    }

    /// ‖U†U − I‖_F, useful in tests.
    pub fn unitarity_defect(&self) -> f64 {
        linalg::fro_norm(&(linalg::dagger(&self.mat).dot(&self.mat) - linalg::eye(self.dim())))
    }
}

/// Dense normalized state on 2^N amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: CVec,
}

impl StateVector {
    pub fn new(amps: CVec) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} is not a power of two",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Numerics(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amps })
    }

    pub(crate) fn from_amplitudes_unchecked(amps: CVec) -> Self {
        Self { amps }
    }

    /// `|0…0⟩` on `n_qubits`.
    pub fn zero_state(n_qubits: usize) -> Self {
        Self::basis_state(n_qubits, 0)
    }

    /// Computational basis state with the given index (qubit 0 = LSB).
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let mut amps: CVec = Array1::zeros(1 << n_qubits);
        amps[index] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state dims {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Eigendecomposition of one segment Hamiltonian, reusable across durations.
///
/// Rescaling a segment's duration does not change its Hamiltonian, so scan
/// loops decompose once and re-exponentiate per duration.
pub struct SegmentPropagator {
    eigenvalues: Array1<f64>,
    eigenvectors: CMat,
    diagonal: Option<Vec<f64>>,
    dim: usize,
}

impl SegmentPropagator {
    pub fn prepare(spec: &RegisterSpec, seg: &PulseSegment) -> Result<Self> {
        let dim = spec.dim();
        if seg.omega == 0.0 {
            let delta = seg.delta.to_vec(spec.n_qubits)?;
            let diag = diagonal_energies(spec, &delta)?;
            return Ok(Self {
                eigenvalues: Array1::zeros(0),
                eigenvectors: Array2::zeros((0, 0)),
                diagonal: Some(diag),
                dim,
            });
        }
        let h = hamiltonian(spec, seg)?;
        if linalg::hermiticity_defect(&h) > 1e-12 {
            return Err(Error::Numerics("segment Hamiltonian is not Hermitian".into()));
        }
        let (eigenvalues, eigenvectors) = linalg::hermitian_eigen(&h);
        Ok(Self { eigenvalues, eigenvectors, diagonal: None, dim })
    }

    /// `exp(−i H t)` for this segment's Hamiltonian.
    pub fn unitary(&self, duration: f64) -> Unitary {
        if let Some(diag) = &self.diagonal {
            let mut mat: CMat = Array2::zeros((self.dim, self.dim));
            for (b, &e) in diag.iter().enumerate() {
                mat[(b, b)] = Complex64::from_polar(1.0, -e * duration);
            }
            return Unitary::from_mat_unchecked(mat);
        }
        let mat = linalg::func_from_eigen(&self.eigenvalues, &self.eigenvectors, |e| {
            Complex64::from_polar(1.0, -e * duration)
        });
        Unitary::from_mat_unchecked(mat)
    }
}

/// `U = exp(−i H(seg) · duration)` by Hermitian eigendecomposition.
pub fn segment_unitary(spec: &RegisterSpec, seg: &PulseSegment) -> Result<Unitary> {
    Ok(SegmentPropagator::prepare(spec, seg)?.unitary(seg.duration))
}

/// Full-sequence unitary, `U_k · … · U_1` with `segments[0]` rightmost.
pub fn sequence_unitary(seq: &PulseSequence) -> Result<Unitary> {
    let mut u = Unitary::identity(seq.register.n_qubits);
    for seg in &seq.segments {
        u = segment_unitary(&seq.register, seg)?.compose(&u)?;
    }
    Ok(u)
}

/// Evolves `psi0` through the sequence without forming the unitary.
///
/// Segments with `Ω = 0` are applied as exact diagonal phases; driven
/// segments use Lanczos steps with full reorthogonalization. Works up to
/// [`STATE_QUBIT_CAP`](crate::STATE_QUBIT_CAP) qubits.
pub fn evolve_state(seq: &PulseSequence, psi0: &StateVector) -> Result<StateVector> {
    let n = seq.register.n_qubits;
    if n > STATE_QUBIT_CAP {
        return Err(Error::RegisterTooLarge { n_qubits: n, cap: STATE_QUBIT_CAP });
    }
    if psi0.dim() != seq.register.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs register dim {}",
            psi0.dim(),
            seq.register.dim()
        )));
    }
    let mut psi = psi0.amps.clone();
    for seg in &seq.segments {
        evolve_segment_in_place(&seq.register, seg, &mut psi)?;
    }
    Ok(StateVector::from_amplitudes_unchecked(psi))
}

fn evolve_segment_in_place(spec: &RegisterSpec, seg: &PulseSegment, psi: &mut CVec) -> Result<()> {
    let n = spec.n_qubits;
    let delta = seg.delta.to_vec(n)?;
    let diag = diagonal_energies(spec, &delta)?;

    if seg.omega == 0.0 {
        for (b, amp) in psi.iter_mut().enumerate() {
            *amp *= Complex64::from_polar(1.0, -diag[b] * seg.duration);
        }
        return Ok(());
    }

    let raise = Complex64::from_polar(0.5 * seg.omega, seg.phi);
    let (dmin, dmax) = diag
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    // Center the spectrum to reduce the effective norm seen by Lanczos; the
    // shift is restored as a global phase.
    let shift = 0.5 * (dmin + dmax);
    let radius = 0.5 * (dmax - dmin) + 0.5 * seg.omega * n as f64;
    let n_sub = ((radius * seg.duration / 10.0).ceil() as usize).max(1);
    let dt = seg.duration / n_sub as f64;

    let apply_h = |x: &CVec, out: &mut CVec| {
        for (b, o) in out.iter_mut().enumerate() {
            *o = Complex64::new(diag[b] - shift, 0.0) * x[b];
        }
        let dim = x.len();
        for j in 0..n {
            let bit = 1usize << j;
            for b in 0..dim {
                if b & bit == 0 {
                    // ⟨b|σ+|b+bit⟩ = 1 (|1⟩ lowers to |0⟩), coefficient e^{iΦ}.
                    let lo = x[b];
                    let hi = x[b | bit];
                    out[b] += raise * hi;
                    out[b | bit] += raise.conj() * lo;
                }
            }
        }
    };

    for _ in 0..n_sub {
        lanczos_exp_step(&apply_h, psi, dt)?;
        // Undo the spectral shift.
        let phase = Complex64::from_polar(1.0, -shift * dt);
        psi.mapv_inplace(|z| z * phase);
    }
    Ok(())
}

/// One Krylov step: `psi <- exp(−i H dt) psi` for Hermitian `H` given as an
/// apply-callback. Uses the Lanczos recurrence with full reorthogonalization
/// and the standard residual estimate to choose the Krylov dimension.
fn lanczos_exp_step(
    apply_h: &impl Fn(&CVec, &mut CVec),
    psi: &mut CVec,
    dt: f64,
) -> Result<()> {
    const M_MAX: usize = 40;
    const TOL: f64 = 1e-11;

    let beta0 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if beta0 < 1e-300 {
        return Err(Error::Numerics("zero state in Krylov propagation".into()));
    }

    let dim = psi.len();
    let mut basis: Vec<CVec> = Vec::with_capacity(M_MAX);
    basis.push(psi.mapv(|z| z / beta0));
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w: CVec = Array1::zeros(dim);
    let mut m = 0usize;

    while m < M_MAX {
        apply_h(&basis[m], &mut w);
        let alpha = basis[m]
            .iter()
            .zip(w.iter())
            .map(|(v, x)| (v.conj() * x).re)
            .sum::<f64>();
        alphas.push(alpha);
        // w <- w − α v_m − β v_{m−1}, then reorthogonalize against all of V.
        for (i, v) in basis.iter().enumerate() {
            let coef = if i == m {
                Complex64::new(alpha, 0.0)
            } else if m > 0 && i == m - 1 {
                Complex64::new(betas[m - 1], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            if coef != Complex64::new(0.0, 0.0) {
                for (wk, vk) in w.iter_mut().zip(v.iter()) {
                    *wk -= coef * vk;
                }
            }
        }
        for v in basis.iter() {
            let overlap: Complex64 = v.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
            if overlap.norm() > 1e-14 {
                for (wk, vk) in w.iter_mut().zip(v.iter()) {
                    *wk -= overlap * vk;
                }
            }
        }
        let beta = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        m += 1;

        // Residual estimate for the current Krylov space.
        if beta < 1e-13 || m == M_MAX {
            betas.push(beta);
            break;
        }
        if m >= 6 {
            let y = tridiag_exp_e1(&alphas, &betas, dt);
            if beta * y[m - 1].norm() * dt.abs() < TOL {
                betas.push(beta);
                break;
            }
        }
        betas.push(beta);
        basis.push(w.mapv(|z| z / beta));
    }

    let y = tridiag_exp_e1(&alphas, &betas[..m.saturating_sub(1)], dt);
    let mut out: CVec = Array1::zeros(dim);
    for (i, v) in basis.iter().enumerate() {
        let yi = y[i] * beta0;
        for (ok, vk) in out.iter_mut().zip(v.iter()) {
            *ok += yi * vk;
        }
    }
    *psi = out;
    Ok(())
}

/// `exp(−i T dt) e_1` for the real symmetric tridiagonal `T` built from the
/// Lanczos coefficients.
fn tridiag_exp_e1(alphas: &[f64], betas: &[f64], dt: f64) -> Vec<Complex64> {
    let m = alphas.len();
    let mut t: CMat = Array2::zeros((m, m));
    for i in 0..m {
        t[(i, i)] = Complex64::new(alphas[i], 0.0);
        if i + 1 < m {
            t[(i, i + 1)] = Complex64::new(betas[i], 0.0);
            t[(i + 1, i)] = Complex64::new(betas[i], 0.0);
        }
    }
    let (lambda, v) = linalg::hermitian_eigen(&t);
    // exp(−i T dt) e1 = V exp(−i λ dt) V† e1
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..m {
        let phase = Complex64::from_polar(1.0, -lambda[j] * dt);
        let vj0 = v[(0, j)].conj();
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += v[(i, j)] * phase * vj0;
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::{Delta, Geometry, InteractionMode};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain(n: usize, geometry: Geometry, interaction: InteractionMode) -> RegisterSpec {
        RegisterSpec::new(n, geometry, 1.0, 1.0, interaction).unwrap()
    }

    fn random_segment(n: usize, rng: &mut impl Rng) -> PulseSegment {
        PulseSegment::new(
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
            Delta::PerQubit((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()),
            rng.gen_range(0.1..2.0),
        )
        .unwrap()
    }

    /// Truncated Taylor series with scaling and squaring; independent of the
    /// eigendecomposition path.
    fn expm_taylor(h: &CMat, t: f64) -> CMat {
        let n = h.nrows();
        let norm = crate::linalg::fro_norm(h) * t.abs();
        let s = (norm / 0.5).log2().ceil().max(0.0) as u32;
        let scale = Complex64::new(0.0, -t / 2f64.powi(s as i32));
        let mut term = crate::linalg::eye(n);
        let mut acc = crate::linalg::eye(n);
        for k in 1..=20 {
            term = term.dot(h).mapv(|z| z * scale / Complex64::new(k as f64, 0.0));
            acc = acc + &term;
        }
        for _ in 0..s {
            acc = acc.dot(&acc);
        }
        acc
    }

    #[test]
    fn zero_field_single_qubit_is_identity() {
        let spec = RegisterSpec::new(
            1,
            Geometry::ChainObc,
            1.0,
            1.0,
            InteractionMode::NearestNeighbour,
        )
        .unwrap();
        let seg = PulseSegment::uniform(0.0, 0.0, 0.0, 3.7).unwrap();
        let u = segment_unitary(&spec, &seg).unwrap();
        assert!(linalg::max_abs_diff(u.mat(), &linalg::eye(2)) < 1e-12);
    }

    #[test]
    fn resonant_pi_pulse_is_minus_i_x() {
        let spec = RegisterSpec::new(
            1,
            Geometry::ChainObc,
            1.0,
            1.0,
            InteractionMode::NearestNeighbour,
        )
        .unwrap();
        let tau = 0.9;
        let seg = PulseSegment::uniform(std::f64::consts::PI / tau, 0.0, 0.0, tau).unwrap();
        let u = segment_unitary(&spec, &seg).unwrap();
        // exp(−i (π/2) σx) = −i σx
        let expect = ndarray::array![
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)]
        ];
        assert!(linalg::max_abs_diff(u.mat(), &expect) < 1e-10);
    }

    #[test]
    fn segment_unitary_matches_taylor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = chain(3, Geometry::ChainPbc, InteractionMode::FullTail);
        for _ in 0..5 {
            let seg = random_segment(3, &mut rng);
            let u = segment_unitary(&spec, &seg).unwrap();
            let h = hamiltonian(&spec, &seg).unwrap();
            let oracle = expm_taylor(&h, seg.duration);
            assert!(linalg::max_abs_diff(u.mat(), &oracle) < 1e-8);
            assert!(u.unitarity_defect() < 1e-9);
        }
    }

    #[test]
    fn sequence_ordering_later_segments_on_left() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = chain(2, Geometry::ChainObc, InteractionMode::NearestNeighbour);
        let a = random_segment(2, &mut rng);
        let b = random_segment(2, &mut rng);
        let seq =
            PulseSequence::new(spec.clone(), vec![a.clone(), b.clone()]).unwrap();
        let ua = segment_unitary(&spec, &a).unwrap();
        let ub = segment_unitary(&spec, &b).unwrap();
        let expect = ub.compose(&ua).unwrap();
        let got = sequence_unitary(&seq).unwrap();
        assert!(linalg::max_abs_diff(got.mat(), expect.mat()) < 1e-10);
    }

    #[test]
    fn subdivision_leaves_unitary_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let spec = chain(3, Geometry::ChainObc, InteractionMode::NearestNeighbour);
        let seg = random_segment(3, &mut rng);
        let whole = PulseSequence::new(spec.clone(), vec![seg.clone()]).unwrap();
        let halves = PulseSequence::new(
            spec.clone(),
            vec![
                PulseSegment { duration: seg.duration / 2.0, ..seg.clone() },
                PulseSegment { duration: seg.duration / 2.0, ..seg.clone() },
            ],
        )
        .unwrap();
        let u1 = sequence_unitary(&whole).unwrap();
        let u2 = sequence_unitary(&halves).unwrap();
        assert!(linalg::max_abs_diff(u1.mat(), u2.mat()) < 1e-9);
    }

    #[test]
    fn evolve_state_matches_dense_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let spec = chain(4, Geometry::ChainPbc, InteractionMode::FullTail);
        let segs: Vec<_> = (0..3).map(|_| random_segment(4, &mut rng)).collect();
        let seq = PulseSequence::new(spec.clone(), segs).unwrap();
        let psi0 = StateVector::zero_state(4);
        let by_state = evolve_state(&seq, &psi0).unwrap();
        let by_dense = sequence_unitary(&seq).unwrap().apply(&psi0).unwrap();
        let diff: f64 = by_state
            .amplitudes()
            .iter()
            .zip(by_dense.amplitudes().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-9, "state path deviates from dense path by {diff}");
        assert!((by_state.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn zero_field_sequence_fixes_zero_state() {
        let spec = chain(5, Geometry::ChainObc, InteractionMode::FullTail);
        let seq = PulseSequence::new(
            spec,
            vec![PulseSegment::uniform(0.0, 0.0, 0.0, 1.3).unwrap()],
        )
        .unwrap();
        let psi = evolve_state(&seq, &StateVector::zero_state(5)).unwrap();
        assert!((psi.amplitudes()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn energy_conserved_within_segment() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let spec = chain(3, Geometry::ChainPbc, InteractionMode::NearestNeighbour);
        let seg = random_segment(3, &mut rng);
        let h = hamiltonian(&spec, &seg).unwrap();
        let psi0 = StateVector::basis_state(3, 5);
        let e0 = expectation(&h, &psi0);
        for frac in [0.25, 0.5, 0.75, 1.0] {
            let part = PulseSegment { duration: seg.duration * frac, ..seg.clone() };
            let seq = PulseSequence::new(spec.clone(), vec![part]).unwrap();
            let psi = evolve_state(&seq, &psi0).unwrap();
            let e = expectation(&h, &psi);
            assert!((e - e0).abs() < 1e-8, "energy drifted by {}", (e - e0).abs());
        }
    }

    fn expectation(h: &CMat, psi: &StateVector) -> f64 {
        let hpsi = h.dot(psi.amplitudes());
        psi.amplitudes()
            .iter()
            .zip(hpsi.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let spec = chain(3, Geometry::ChainObc, InteractionMode::NearestNeighbour);
        let seq = PulseSequence::new(
            spec,
            vec![PulseSegment::uniform(0.1, 0.0, 0.0, 1.0).unwrap()],
        )
        .unwrap();
        let psi = StateVector::zero_state(2);
        assert!(matches!(evolve_state(&seq, &psi), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn krylov_handles_larger_register() {
        // Cross-check the Lanczos path against the dense path at a size where
        // substepping actually engages.
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let spec = chain(8, Geometry::ChainObc, InteractionMode::FullTail);
        let seg = PulseSegment::new(
            0.9,
            1.2,
            Delta::PerQubit((0..8).map(|_| rng.gen_range(-1.5..1.5)).collect()),
            4.0,
        )
        .unwrap();
        let seq = PulseSequence::new(spec.clone(), vec![seg]).unwrap();
        let psi0 = StateVector::basis_state(8, 17);
        let by_state = evolve_state(&seq, &psi0).unwrap();
        let by_dense = sequence_unitary(&seq).unwrap().apply(&psi0).unwrap();
        let diff: f64 = by_state
            .amplitudes()
            .iter()
            .zip(by_dense.amplitudes().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-8, "Krylov deviates by {diff}");
    }
}
