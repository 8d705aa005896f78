// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Variational eigensolver over paired-electron Hamiltonians with a
//! Givens-SWAP-network ansatz.
//!
//! A [`PairedHamiltonian`] is ingested from a fixture JSON: a constant plus
//! real-coefficient Pauli terms restricted to the hardcore-boson structure —
//! Z / ZZ terms and matched `XX + YY` hopping pairs. Its quoted reference
//! ground energy is recomputed on ingest by exact diagonalization within the
//! particle-number sector and must agree.
//!
//! The ansatz applies brick layers of Givens-SWAP gates to the Hartree-Fock
//! state, either as exact 4×4 matrices (ideal backend) or through compiled
//! pulse schedules (analog backend). Energies are minimized by the same
//! quasi-Newton solver the pulse optimizer uses, with free bounds.

use std::collections::HashMap;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gatelib::{
    brick_layer_pairs, compile_givens_swap, CompiledSchedule, RotationLibrary, ScheduleOp,
};
use crate::gates;
use crate::linalg::{self, CMat, CVec};
use crate::propagator::StateVector;
use crate::pulseopt::{self, Bounds, SolverConfig};
use crate::register::RegisterSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
    N,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: f64,
    /// Operator–qubit pairs, e.g. `[["X", 0], ["X", 1]]`.
    pub ops: Vec<(PauliOp, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureFile {
    pub molecule: String,
    pub basis: String,
    pub n_qubits: usize,
    pub n_pairs: usize,
    pub constant: f64,
    pub terms: Vec<PauliTerm>,
    pub reference_energy: f64,
    #[serde(default)]
    pub description: String,
}

/// A validated paired-electron Hamiltonian.
#[derive(Debug, Clone)]
pub struct PairedHamiltonian {
    pub molecule: String,
    pub basis: String,
    pub n_qubits: usize,
    pub n_pairs: usize,
    pub constant: f64,
    pub terms: Vec<PauliTerm>,
    /// Ground energy in the `n_pairs` sector, recomputed on ingest.
    pub reference_energy: f64,
}

impl PairedHamiltonian {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: FixtureFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidFixture(format!("bad fixture JSON: {e}")))?;
        Self::from_file(file)
    }

    pub fn from_file(file: FixtureFile) -> Result<Self> {
        let n = file.n_qubits;
        if n == 0 || n > 12 {
            return Err(Error::InvalidFixture(format!(
                "n_qubits {n} outside the supported 1..=12"
            )));
        }
        if file.n_pairs > n {
            return Err(Error::InvalidFixture("n_pairs exceeds n_qubits".into()));
        }
        for (i, term) in file.terms.iter().enumerate() {
            if !term.coeff.is_finite() {
                return Err(Error::InvalidFixture(format!("term {i}: non-finite coefficient")));
            }
            let mut seen = Vec::new();
            for &(_, q) in &term.ops {
                if q >= n {
                    return Err(Error::InvalidFixture(format!(
                        "term {i}: qubit {q} out of range"
                    )));
                }
                if seen.contains(&q) {
                    return Err(Error::InvalidFixture(format!(
                        "term {i}: repeated qubit {q}"
                    )));
                }
                seen.push(q);
            }
        }

        validate_hopping_structure(&file.terms)?;

        let h = PairedHamiltonian {
            molecule: file.molecule,
            basis: file.basis,
            n_qubits: n,
            n_pairs: file.n_pairs,
            constant: file.constant,
            terms: file.terms,
            reference_energy: 0.0,
        };

        // Number symmetry: [H, Σ n̂] = 0, checked as matrices.
        let dense = h.dense_matrix();
        let dim = 1usize << n;
        let mut number: CMat = Array2::zeros((dim, dim));
        for b in 0..dim {
            number[(b, b)] = Complex64::new((b as u32).count_ones() as f64, 0.0);
        }
        let comm = dense.dot(&number) - number.dot(&dense);
        let defect = linalg::fro_norm(&comm);
        if defect > 1e-10 {
            return Err(Error::InvalidFixture(format!(
                "Hamiltonian does not conserve particle number (‖[H,N]‖ = {defect:.2e})"
            )));
        }

        let recomputed = sector_ground_energy(&dense, n, h.n_pairs);
        if (recomputed - file.reference_energy).abs() > 1e-6 {
            return Err(Error::InvalidFixture(format!(
                "reference energy {:.8} disagrees with recomputed sector ground {:.8}",
                file.reference_energy, recomputed
            )));
        }

        Ok(PairedHamiltonian { reference_energy: recomputed, ..h })
    }

    /// Apply the (constant-free) operator part to raw amplitudes.
    pub fn apply(&self, amps: &CVec) -> CVec {
        let dim = amps.len();
        let mut out: CVec = Array1::zeros(dim);
        for term in &self.terms {
            for (b, &a) in amps.iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut target = b;
                let mut factor = Complex64::new(term.coeff, 0.0);
                for &(op, q) in &term.ops {
                    let bit = (b >> q) & 1;
                    match op {
                        PauliOp::I => {}
                        PauliOp::X => target ^= 1 << q,
                        PauliOp::Y => {
                            target ^= 1 << q;
                            // σy|0⟩ = i|1⟩, σy|1⟩ = −i|0⟩
                            factor *= if bit == 0 {
                                Complex64::new(0.0, 1.0)
                            } else {
                                Complex64::new(0.0, -1.0)
                            };
                        }
                        PauliOp::Z => {
                            if bit == 1 {
                                factor = -factor;
                            }
                        }
                        PauliOp::N => {
                            if bit == 0 {
                                factor = Complex64::new(0.0, 0.0);
                            }
                        }
                    }
                    if factor == Complex64::new(0.0, 0.0) {
                        break;
                    }
                }
                if factor != Complex64::new(0.0, 0.0) {
                    out[target] += factor * a;
                }
            }
        }
        out
    }

    pub fn dense_matrix(&self) -> CMat {
        let dim = 1usize << self.n_qubits;
        let mut m: CMat = Array2::zeros((dim, dim));
        for col in 0..dim {
            let mut e: CVec = Array1::zeros(dim);
            e[col] = Complex64::new(1.0, 0.0);
            let he = self.apply(&e);
            for row in 0..dim {
                m[(row, col)] = he[row];
            }
        }
        for d in 0..dim {
            m[(d, d)] += Complex64::new(self.constant, 0.0);
        }
        m
    }
}

/// Hopping terms must come in matched `XX`/`YY` pairs with equal real
/// coefficients; lone X/Y strings or mixed XY products break the hardcore
/// boson structure.
fn validate_hopping_structure(terms: &[PauliTerm]) -> Result<()> {
    let mut xx: HashMap<(usize, usize), f64> = HashMap::new();
    let mut yy: HashMap<(usize, usize), f64> = HashMap::new();
    for (i, term) in terms.iter().enumerate() {
        let xy: Vec<(PauliOp, usize)> = term
            .ops
            .iter()
            .filter(|(op, _)| matches!(op, PauliOp::X | PauliOp::Y))
            .copied()
            .collect();
        match xy.len() {
            0 => {}
            2 => {
                let (op_a, qa) = xy[0];
                let (op_b, qb) = xy[1];
                if op_a != op_b {
                    return Err(Error::InvalidFixture(format!(
                        "term {i}: mixed X/Y product is not a pair-hopping term"
                    )));
                }
                if term.ops.len() != 2 {
                    return Err(Error::InvalidFixture(format!(
                        "term {i}: hopping terms must be plain two-qubit XX or YY"
                    )));
                }
                let key = (qa.min(qb), qa.max(qb));
                let map = if op_a == PauliOp::X { &mut xx } else { &mut yy };
                if map.insert(key, term.coeff).is_some() {
                    return Err(Error::InvalidFixture(format!(
                        "term {i}: duplicate hopping term on {key:?}"
                    )));
                }
            }
            _ => {
                return Err(Error::InvalidFixture(format!(
                    "term {i}: X/Y weight {} is not hardcore-boson hopping",
                    xy.len()
                )));
            }
        }
    }
    for (key, cx) in &xx {
        match yy.get(key) {
            Some(cy) if (cx - cy).abs() < 1e-12 => {}
            _ => {
                return Err(Error::InvalidFixture(format!(
                    "XX term on {key:?} lacks a matching YY term"
                )));
            }
        }
    }
    for key in yy.keys() {
        if !xx.contains_key(key) {
            return Err(Error::InvalidFixture(format!(
                "YY term on {key:?} lacks a matching XX term"
            )));
        }
    }
    Ok(())
}

/// Exact ground energy within the fixed-particle-number sector.
pub fn sector_ground_energy(dense: &CMat, n_qubits: usize, n_pairs: usize) -> f64 {
    let dim = 1usize << n_qubits;
    let sector: Vec<usize> =
        (0..dim).filter(|b| (*b as u32).count_ones() as usize == n_pairs).collect();
    let sd = sector.len();
    let mut sub: CMat = Array2::zeros((sd, sd));
    for (r, &br) in sector.iter().enumerate() {
        for (c, &bc) in sector.iter().enumerate() {
            sub[(r, c)] = dense[(br, bc)];
        }
    }
    let (lambda, _) = linalg::hermitian_eigen(&sub);
    lambda[0]
}

/// The computational basis state with the `n_pairs` lowest orbitals doubly
/// occupied: orbital p ↔ qubit p, occupied = `|1⟩`.
pub fn hartree_fock_state(n_qubits: usize, n_pairs: usize) -> Result<StateVector> {
    if n_pairs > n_qubits {
        return Err(Error::InvalidFixture("n_pairs exceeds n_qubits".into()));
    }
    let index = (1usize << n_pairs) - 1;
    Ok(StateVector::basis_state(n_qubits, index))
}

/// Real expectation `⟨ψ|H|ψ⟩` including the constant.
pub fn energy(h: &PairedHamiltonian, psi: &StateVector) -> Result<f64> {
    if psi.dim() != 1usize << h.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs Hamiltonian on {} qubits",
            psi.dim(),
            h.n_qubits
        )));
    }
    let hpsi = h.apply(psi.amplitudes());
    let val: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(hpsi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    if val.im.abs() > 1e-10 {
        return Err(Error::Numerics(format!(
            "energy has imaginary part {:.2e}",
            val.im
        )));
    }
    Ok(val.re + h.constant)
}

/// How ansatz gates are executed.
#[derive(Clone)]
pub enum Backend {
    /// Exact 4×4 Givens-SWAP matrices.
    Ideal,
    /// Compiled pulse schedules on a register.
    Analog { spec: RegisterSpec, lib: RotationLibrary },
}

impl std::fmt::Debug for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Ideal => f.write_str("Ideal"),
            Backend::Analog { .. } => f.write_str("Analog"),
        }
    }
}

/// Brick-layer Givens-SWAP ansatz: `depth` alternating layers of adjacent
/// pairs, one parameter per gate.
#[derive(Debug, Clone)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    pub depth: usize,
    pub backend: Backend,
}

impl AnsatzSpec {
    pub fn layer_pairs(&self, layer: usize) -> Vec<(usize, usize)> {
        brick_layer_pairs(self.n_qubits, layer)
    }

    pub fn parameter_count(&self) -> usize {
        (0..self.depth).map(|l| self.layer_pairs(l).len()).sum()
    }
}

/// Memoizes dense unitaries of driven (Ω ≠ 0) schedule segments, which are
/// the θ-independent rotation pulses; diagonal segments are cheap and
/// applied directly.
#[derive(Default)]
pub struct SegmentCache {
    map: HashMap<Vec<u64>, CMat>,
}

fn op_key(op: &ScheduleOp) -> Vec<u64> {
    match op {
        ScheduleOp::Pulse(seg) => {
            let mut key = vec![0u64, seg.omega.to_bits(), seg.phi.to_bits(), seg.duration.to_bits()];
            match &seg.delta {
                crate::register::Delta::Uniform(d) => key.push(d.to_bits()),
                crate::register::Delta::PerQubit(v) => {
                    key.push(u64::MAX);
                    key.extend(v.iter().map(|d| d.to_bits()));
                }
            }
            key
        }
        ScheduleOp::IdealRotation(kind) => vec![1u64, *kind as u64],
    }
}

fn apply_schedule_cached(
    sched: &CompiledSchedule,
    psi: &StateVector,
    cache: &mut SegmentCache,
) -> Result<StateVector> {
    let spec = &sched.register;
    let mut amps = psi.amplitudes().clone();
    for t in &sched.ops {
        match &t.op {
            ScheduleOp::Pulse(seg) if seg.omega == 0.0 => {
                let delta = seg.delta.to_vec(spec.n_qubits)?;
                let diag = crate::register::diagonal_energies(spec, &delta)?;
                for (b, a) in amps.iter_mut().enumerate() {
                    *a *= Complex64::from_polar(1.0, -diag[b] * seg.duration);
                }
            }
            other => {
                let key = op_key(other);
                if !cache.map.contains_key(&key) {
                    let u = match other {
                        ScheduleOp::Pulse(seg) => {
                            crate::propagator::segment_unitary(spec, seg)?.mat().clone()
                        }
                        ScheduleOp::IdealRotation(kind) => {
                            gates::global_rotation(spec.n_qubits, *kind)?.mat().clone()
                        }
                    };
                    cache.map.insert(key.clone(), u);
                }
                let u = &cache.map[&key];
                amps = u.dot(&amps);
            }
        }
    }
    Ok(StateVector::from_amplitudes_unchecked(amps))
}

/// Apply the ansatz with the given parameters to a start state.
pub fn apply_ansatz(
    spec: &AnsatzSpec,
    thetas: &[f64],
    psi0: &StateVector,
    cache: &mut SegmentCache,
) -> Result<StateVector> {
    if thetas.len() != spec.parameter_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} parameters for an ansatz needing {}",
            thetas.len(),
            spec.parameter_count()
        )));
    }
    let mut psi = psi0.clone();
    let mut k = 0usize;
    for layer in 0..spec.depth {
        for (a, b) in spec.layer_pairs(layer) {
            let theta = thetas[k];
            k += 1;
            match &spec.backend {
                Backend::Ideal => {
                    let mut amps = psi.amplitudes().clone();
                    gates::apply_two_qubit_in_place(
                        &mut amps,
                        spec.n_qubits,
                        a,
                        b,
                        &gates::givens_swap_matrix(theta),
                    );
                    psi = StateVector::from_amplitudes_unchecked(amps);
                }
                Backend::Analog { spec: reg, lib } => {
                    let sched = compile_givens_swap(a, b, theta, reg, lib)?;
                    psi = apply_schedule_cached(&sched, &psi, cache)?;
                }
            }
        }
    }
    Ok(psi)
}

#[derive(Debug, Clone, Serialize)]
pub struct VqeResult {
    /// Best energy seen after each evaluation (non-increasing).
    pub trace: Vec<f64>,
    pub best_thetas: Vec<f64>,
    pub final_energy: f64,
    pub reference_energy: f64,
    /// `final_energy − reference_energy`, in Hartree.
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct VqeConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub restarts: usize,
    pub rng_seed: u64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self { max_iters: 300, grad_tol: 1e-7, restarts: 0, rng_seed: 7 }
    }
}

/// Minimize the energy over the ansatz parameters, starting from zeros
/// (plus optional random restarts).
pub fn run_vqe(
    h: &PairedHamiltonian,
    ansatz: &AnsatzSpec,
    cfg: &VqeConfig,
) -> Result<VqeResult> {
    if ansatz.n_qubits != h.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "ansatz on {} qubits, Hamiltonian on {}",
            ansatz.n_qubits, h.n_qubits
        )));
    }
    let n_params = ansatz.parameter_count();
    let hf = hartree_fock_state(h.n_qubits, h.n_pairs)?;

    let trace = std::cell::RefCell::new(Vec::<f64>::new());
    let cache = std::cell::RefCell::new(SegmentCache::default());
    let mut objective = |thetas: &[f64]| -> f64 {
        let mut cache = cache.borrow_mut();
        let e = apply_ansatz(ansatz, thetas, &hf, &mut cache)
            .and_then(|psi| energy(h, &psi))
            .unwrap_or(f64::INFINITY);
        let mut tr = trace.borrow_mut();
        let best = tr.last().copied().unwrap_or(f64::INFINITY);
        tr.push(e.min(best));
        e
    };

    let solver = SolverConfig {
        max_iters: cfg.max_iters,
        grad_tol: cfg.grad_tol,
        loss_tol: 1e-12,
        ..Default::default()
    };
    let bounds = Bounds::free(n_params);

    let mut best: Option<(f64, Vec<f64>)> = None;
    use rand::Rng;
    use rand::SeedableRng;
    for attempt in 0..=cfg.restarts {
        let x0: Vec<f64> = if attempt == 0 {
            vec![0.0; n_params]
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(
                cfg.rng_seed.wrapping_add(attempt as u64),
            );
            (0..n_params).map(|_| rng.gen_range(-0.5..0.5)).collect()
        };
        let res = pulseopt::lbfgsb_minimize(&mut objective, &x0, &bounds, &solver);
        if best.as_ref().map_or(true, |(e, _)| res.loss < *e) {
            best = Some((res.loss, res.x));
        }
    }

    let (final_energy, best_thetas) = best.expect("at least one attempt runs");
    let trace = trace.into_inner();
    let evaluations = trace.len();
    Ok(VqeResult {
        trace,
        best_thetas,
        final_energy,
        reference_energy: h.reference_energy,
        error: final_energy - h.reference_energy,
        evaluations,
    })
}
