// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Ideal digital gate matrices: the objects the analog pulses emulate.
//!
//! Rotation convention: `Rα(θ) = exp(−iθσα/2)`. Uppercase `RX`/`RY` means the
//! same rotation applied to every qubit. Two-qubit gates are embedded with
//! qubit `i` as the high bit of the local 2-bit index, `|q_i q_j⟩`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{eye, CMat};
use crate::propagator::{StateVector, Unitary};
use crate::{Error, Result, DENSE_QUBIT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn angle(self) -> f64 {
        match self {
            Sign::Plus => std::f64::consts::FRAC_PI_2,
            Sign::Minus => -std::f64::consts::FRAC_PI_2,
        }
    }
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A global ±π/2 rotation, the unit the pulse optimizer synthesizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationKind {
    RxPlus,
    RxMinus,
    RyPlus,
    RyMinus,
}

impl RotationKind {
    pub const ALL: [RotationKind; 4] =
        [RotationKind::RxPlus, RotationKind::RxMinus, RotationKind::RyPlus, RotationKind::RyMinus];

    pub fn axis(self) -> Axis {
        match self {
            RotationKind::RxPlus | RotationKind::RxMinus => Axis::X,
            RotationKind::RyPlus | RotationKind::RyMinus => Axis::Y,
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            RotationKind::RxPlus | RotationKind::RyPlus => Sign::Plus,
            RotationKind::RxMinus | RotationKind::RyMinus => Sign::Minus,
        }
    }

    pub fn from_axis_sign(axis: Axis, sign: Sign) -> Self {
        match (axis, sign) {
            (Axis::X, Sign::Plus) => RotationKind::RxPlus,
            (Axis::X, Sign::Minus) => RotationKind::RxMinus,
            (Axis::Y, Sign::Plus) => RotationKind::RyPlus,
            (Axis::Y, Sign::Minus) => RotationKind::RyMinus,
        }
    }

    pub fn inverse(self) -> Self {
        Self::from_axis_sign(self.axis(), self.sign().flipped())
    }
}

impl std::fmt::Display for RotationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RotationKind::RxPlus => "RX(+π/2)",
            RotationKind::RxMinus => "RX(−π/2)",
            RotationKind::RyPlus => "RY(+π/2)",
            RotationKind::RyMinus => "RY(−π/2)",
        };
        f.write_str(s)
    }
}

pub fn rx(theta: f64) -> CMat {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    ndarray::array![[c, s], [s, c]]
}

pub fn ry(theta: f64) -> CMat {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    ndarray::array![
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]
    ]
}

pub fn rz(theta: f64) -> CMat {
    ndarray::array![
        [Complex64::from_polar(1.0, -theta / 2.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)]
    ]
}

pub fn pauli_x() -> CMat {
    ndarray::array![
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    ]
}

fn check_dense(n: usize) -> Result<()> {
    if n > DENSE_QUBIT_CAP {
        return Err(Error::RegisterTooLarge { n_qubits: n, cap: DENSE_QUBIT_CAP });
    }
    Ok(())
}

/// Tensor product of per-qubit 2×2 operators, `ops[k]` acting on qubit `k`.
pub fn tensor_product(ops: &[CMat]) -> Result<Unitary> {
    check_dense(ops.len())?;
    let n = ops.len();
    let dim = 1usize << n;
    let mut mat: CMat = Array2::zeros((dim, dim));
    for row in 0..dim {
        for col in 0..dim {
            let mut v = Complex64::new(1.0, 0.0);
            for (k, op) in ops.iter().enumerate() {
                v *= op[((row >> k) & 1, (col >> k) & 1)];
                if v == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            mat[(row, col)] = v;
        }
    }
    Unitary::new(mat)
}

/// `⊗_j Rα(θ_j)` — a layer of local rotations about one axis.
pub fn local_rotation_layer(axis: Axis, thetas: &[f64]) -> Result<Unitary> {
    let ops: Vec<CMat> = thetas
        .iter()
        .map(|&t| match axis {
            Axis::X => rx(t),
            Axis::Y => ry(t),
        })
        .collect();
    tensor_product(&ops)
}

/// `⊗_j Rz(θ_j)` (diagonal).
pub fn rz_layer(thetas: &[f64]) -> Result<Unitary> {
    check_dense(thetas.len())?;
    let n = thetas.len();
    let dim = 1usize << n;
    let mut mat: CMat = Array2::zeros((dim, dim));
    for b in 0..dim {
        let mut phase = 0.0;
        for (j, &t) in thetas.iter().enumerate() {
            // Rz(θ) = diag(e^{−iθ/2}, e^{+iθ/2})
            phase += if (b >> j) & 1 == 0 { -t / 2.0 } else { t / 2.0 };
        }
        mat[(b, b)] = Complex64::from_polar(1.0, phase);
    }
    Ok(Unitary::from_mat_unchecked(mat))
}

/// Global rotation `Rα(±π/2)^{⊗n}`.
pub fn global_rotation(n: usize, kind: RotationKind) -> Result<Unitary> {
    local_rotation_layer(kind.axis(), &vec![kind.sign().angle(); n])
}

/// `⊗_{k ∈ set} X_k`.
pub fn x_on(n: usize, set: &[usize]) -> Result<Unitary> {
    let ops: Vec<CMat> =
        (0..n).map(|k| if set.contains(&k) { pauli_x() } else { eye(2) }).collect();
    tensor_product(&ops)
}

/// Product of CZ gates over the given edges (diagonal: −1 on `|…1…1…⟩`).
pub fn cz_product(n: usize, edges: &[(usize, usize)]) -> Result<Unitary> {
    check_dense(n)?;
    let dim = 1usize << n;
    let mut mat: CMat = Array2::zeros((dim, dim));
    for b in 0..dim {
        let mut sign = 1.0;
        for &(i, j) in edges {
            if (b >> i) & 1 == 1 && (b >> j) & 1 == 1 {
                sign = -sign;
            }
        }
        mat[(b, b)] = Complex64::new(sign, 0.0);
    }
    Ok(Unitary::from_mat_unchecked(mat))
}

/// Embed a two-qubit gate: local index is `2·bit(q_hi) + bit(q_lo)`.
pub fn embed_two_qubit(n: usize, q_hi: usize, q_lo: usize, u4: &CMat) -> Result<Unitary> {
    check_dense(n)?;
    if q_hi == q_lo || q_hi >= n || q_lo >= n {
        return Err(Error::DimensionMismatch(format!(
            "invalid qubit pair ({q_hi},{q_lo}) on {n} qubits"
        )));
    }
    let dim = 1usize << n;
    let mut mat: CMat = Array2::zeros((dim, dim));
    let rest_mask = !((1usize << q_hi) | (1usize << q_lo));
    for col in 0..dim {
        let lc = 2 * ((col >> q_hi) & 1) + ((col >> q_lo) & 1);
        for lr in 0..4 {
            let v = u4[(lr, lc)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = (col & rest_mask)
                | (((lr >> 1) & 1) << q_hi)
                | ((lr & 1) << q_lo);
            mat[(row, col)] = v;
        }
    }
    Unitary::new(mat)
}

/// CNOT with the given control and target (4×4, control = high bit).
pub fn cnot_matrix() -> CMat {
    let mut m: CMat = Array2::zeros((4, 4));
    let one = Complex64::new(1.0, 0.0);
    m[(0, 0)] = one;
    m[(1, 1)] = one;
    m[(2, 3)] = one;
    m[(3, 2)] = one;
    m
}

pub fn cnot(n: usize, control: usize, target: usize) -> Result<Unitary> {
    embed_two_qubit(n, control, target, &cnot_matrix())
}

pub fn swap_matrix() -> CMat {
    let mut m: CMat = Array2::zeros((4, 4));
    let one = Complex64::new(1.0, 0.0);
    m[(0, 0)] = one;
    m[(1, 2)] = one;
    m[(2, 1)] = one;
    m[(3, 3)] = one;
    m
}

pub fn swap(n: usize, a: usize, b: usize) -> Result<Unitary> {
    embed_two_qubit(n, a, b, &swap_matrix())
}

/// Givens-SWAP: a Givens rotation by `θ` in the single-excitation block,
/// followed by a SWAP.
pub fn givens_swap_matrix(theta: f64) -> CMat {
    let c = Complex64::new(theta.cos(), 0.0);
    let s = Complex64::new(theta.sin(), 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // SWAP · G(θ): the middle block becomes [[s, c], [c, −s]].
    ndarray::array![
        [one, zero, zero, zero],
        [zero, s, c, zero],
        [zero, c, -s, zero],
        [zero, zero, zero, one]
    ]
}

pub fn givens_swap(n: usize, q_hi: usize, q_lo: usize, theta: f64) -> Result<Unitary> {
    embed_two_qubit(n, q_hi, q_lo, &givens_swap_matrix(theta))
}

/// Apply a 4×4 gate to a raw amplitude vector in place (matrix-free).
pub fn apply_two_qubit_in_place(
    amps: &mut Array1<Complex64>,
    n: usize,
    q_hi: usize,
    q_lo: usize,
    u4: &CMat,
) {
    let dim = 1usize << n;
    let hi = 1usize << q_hi;
    let lo = 1usize << q_lo;
    for b in 0..dim {
        if b & hi == 0 && b & lo == 0 {
            let idx = [b, b | lo, b | hi, b | hi | lo];
            let old = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
            for r in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..4 {
                    acc += u4[(r, c)] * old[c];
                }
                amps[idx[r]] = acc;
            }
        }
    }
}

/// A named simulation target: what a pulse schedule is supposed to emulate.
///
/// Product-structured targets also know how they act on `|0…0⟩`, which is
/// what lets overlap metrics run far beyond the dense cap.
#[derive(Debug, Clone)]
pub enum GateTarget {
    Identity,
    Global(RotationKind),
    /// Local X (bit flip) on one qubit.
    LocalX(usize),
    /// A layer of local Rz rotations.
    RzLayer(Vec<f64>),
    Matrix(Unitary),
}

impl GateTarget {
    /// Parse CLI spellings: `identity`, `rx+`, `rx-`, `ry+`, `ry-`, `x:<k>`.
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        Ok(match lower.as_str() {
            "identity" | "id" => GateTarget::Identity,
            "rx+" => GateTarget::Global(RotationKind::RxPlus),
            "rx-" => GateTarget::Global(RotationKind::RxMinus),
            "ry+" => GateTarget::Global(RotationKind::RyPlus),
            "ry-" => GateTarget::Global(RotationKind::RyMinus),
            _ => {
                if let Some(q) = lower.strip_prefix("x:") {
                    let qubit = q
                        .parse::<usize>()
                        .map_err(|_| Error::UnknownGate(name.to_string()))?;
                    GateTarget::LocalX(qubit)
                } else {
                    return Err(Error::UnknownGate(name.to_string()));
                }
            }
        })
    }

    pub fn unitary(&self, n: usize) -> Result<Unitary> {
        match self {
            GateTarget::Identity => {
                check_dense(n)?;
                Ok(Unitary::identity(n))
            }
            GateTarget::Global(kind) => global_rotation(n, *kind),
            GateTarget::LocalX(q) => {
                if *q >= n {
                    return Err(Error::DimensionMismatch(format!(
                        "qubit {q} out of range for {n} qubits"
                    )));
                }
                x_on(n, &[*q])
            }
            GateTarget::RzLayer(thetas) => {
                if thetas.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "Rz layer has {} angles for {} qubits",
                        thetas.len(),
                        n
                    )));
                }
                rz_layer(thetas)
            }
            GateTarget::Matrix(u) => {
                if u.n_qubits() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "target matrix is on {} qubits, register has {}",
                        u.n_qubits(),
                        n
                    )));
                }
                Ok(u.clone())
            }
        }
    }

    /// `G|0…0⟩`, computed without forming `G` whenever the target is a
    /// product of single-qubit factors.
    pub fn target_state(&self, n: usize) -> Result<StateVector> {
        match self {
            GateTarget::Identity => Ok(StateVector::zero_state(n)),
            GateTarget::LocalX(q) => {
                if *q >= n {
                    return Err(Error::DimensionMismatch(format!(
                        "qubit {q} out of range for {n} qubits"
                    )));
                }
                Ok(StateVector::basis_state(n, 1usize << q))
            }
            GateTarget::RzLayer(thetas) => {
                if thetas.len() != n {
                    return Err(Error::DimensionMismatch("Rz layer length".into()));
                }
                // Diagonal: |0…0⟩ only picks up a phase.
                let phase: f64 = thetas.iter().map(|t| -t / 2.0).sum();
                let mut amps: Array1<Complex64> = Array1::zeros(1 << n);
                amps[0] = Complex64::from_polar(1.0, phase);
                Ok(StateVector::new(amps)?)
            }
            GateTarget::Global(kind) => {
                // Single-qubit action on |0⟩, tensored n times.
                let u2 = match kind.axis() {
                    Axis::X => rx(kind.sign().angle()),
                    Axis::Y => ry(kind.sign().angle()),
                };
                let (a, b) = (u2[(0, 0)], u2[(1, 0)]);
                let mut amps: Array1<Complex64> = Array1::zeros(1 << n);
                for idx in 0..(1usize << n) {
                    let ones = (idx as u32).count_ones() as i32;
                    amps[idx] = a.powi(n as i32 - ones) * b.powi(ones);
                }
                Ok(StateVector::new(amps)?)
            }
            GateTarget::Matrix(u) => u.apply(&StateVector::zero_state(u.n_qubits())),
        }
    }
}
