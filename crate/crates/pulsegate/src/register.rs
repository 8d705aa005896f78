// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Register geometry, couplings, and the segment Hamiltonian.
//!
//! A [`RegisterSpec`] fixes atom positions (linear chain with open or
//! periodic boundaries, or a ring with chord nearest-neighbour spacing `r`)
//! and the interaction law: either the full `C6/r^6` tail or its
//! nearest-neighbour truncation. A [`PulseSegment`] is one piecewise-constant
//! control interval; [`hamiltonian`] assembles the dense operator it
//! generates.
//!
//! All types are immutable value objects; the free functions are pure.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::CMat;
use crate::{Error, Result, DENSE_QUBIT_CAP};

pub const TAU: f64 = std::f64::consts::TAU;

/// Chain/ring layout of the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    /// Linear chain, open boundary conditions: `r_ij = |i−j|·r`.
    #[serde(rename = "chain_obc")]
    ChainObc,
    /// Linear chain, periodic boundary conditions:
    /// `r_ij = min(|i−j|, N−|i−j|)·r`.
    #[serde(rename = "chain_pbc")]
    ChainPbc,
    /// Atoms on a circle with *chord* nearest-neighbour spacing `r`;
    /// pairwise distances are chords of the circumscribed circle.
    #[serde(rename = "ring")]
    Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InteractionMode {
    /// Keep only nearest-neighbour couplings, all equal to `J = C6/r^6`.
    #[serde(rename = "nn")]
    NearestNeighbour,
    /// Full `C6/r_ij^6` tail over every pair.
    #[serde(rename = "full")]
    FullTail,
}

/// Atom register: geometry, spacing, and interaction law.
///
/// Internal units are angular (rad/µs with ħ = 1); `c6` is in rad·µm⁶/µs.
/// The JSON file format uses plain MHz — see [`RegisterSpec::from_json`].
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterSpec {
    pub n_qubits: usize,
    pub geometry: Geometry,
    /// Nearest-neighbour spacing in µm (chord spacing for rings).
    pub spacing_um: f64,
    /// Van der Waals coefficient in rad·µm⁶/µs.
    pub c6: f64,
    pub interaction: InteractionMode,
}

/// On-disk register document. Frequencies are in MHz (ν, not angular):
/// `c6` here is in MHz·µm⁶ and is multiplied by 2π at ingest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegisterFile {
    pub n_qubits: usize,
    pub geometry: Geometry,
    pub spacing_um: f64,
    pub c6: f64,
    pub interaction: InteractionMode,
}

impl RegisterSpec {
    pub fn new(
        n_qubits: usize,
        geometry: Geometry,
        spacing_um: f64,
        c6: f64,
        interaction: InteractionMode,
    ) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidRegister("n_qubits must be positive".into()));
        }
        if !(spacing_um > 0.0) {
            return Err(Error::InvalidRegister("spacing must be positive".into()));
        }
        if !(c6 > 0.0) {
            return Err(Error::InvalidRegister("c6 must be positive".into()));
        }
        Ok(Self { n_qubits, geometry, spacing_um, c6, interaction })
    }

    /// Nearest-neighbour coupling `J = C6 / r^6` in rad/µs.
    pub fn nn_coupling(&self) -> f64 {
        self.c6 / self.spacing_um.powi(6)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Distance between atoms `i` and `j` in µm.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let n = self.n_qubits;
        let d = i.abs_diff(j);
        match self.geometry {
            Geometry::ChainObc => d as f64 * self.spacing_um,
            Geometry::ChainPbc => d.min(n - d) as f64 * self.spacing_um,
            Geometry::Ring => {
                // Chord between sites on the circumscribed circle whose
                // adjacent chord equals the requested spacing.
                let radius = self.spacing_um / (2.0 * (std::f64::consts::PI / n as f64).sin());
                2.0 * radius * (std::f64::consts::PI * d as f64 / n as f64).sin()
            }
        }
    }

    /// Nearest-neighbour edges of the register graph, each pair once.
    pub fn nn_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n_qubits;
        let mut edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        match self.geometry {
            Geometry::ChainObc => {}
            Geometry::ChainPbc | Geometry::Ring => {
                if n > 2 {
                    edges.push((n - 1, 0));
                }
            }
        }
        edges
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RegisterFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidRegister(format!("bad register JSON: {e}")))?;
        Self::new(
            file.n_qubits,
            file.geometry,
            file.spacing_um,
            TAU * file.c6,
            file.interaction,
        )
    }

    pub fn to_json(&self) -> String {
        let file = RegisterFile {
            n_qubits: self.n_qubits,
            geometry: self.geometry,
            spacing_um: self.spacing_um,
            c6: self.c6 / TAU,
            interaction: self.interaction,
        };
        serde_json::to_string_pretty(&file).expect("register serialization cannot fail")
    }
}

/// Per-qubit detuning, with a uniform shorthand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Delta {
    Uniform(f64),
    PerQubit(Vec<f64>),
}

impl Delta {
    pub fn value(&self, qubit: usize) -> f64 {
        match self {
            Delta::Uniform(d) => *d,
            Delta::PerQubit(v) => v[qubit],
        }
    }

    pub fn to_vec(&self, n_qubits: usize) -> Result<Vec<f64>> {
        match self {
            Delta::Uniform(d) => Ok(vec![*d; n_qubits]),
            Delta::PerQubit(v) => {
                if v.len() != n_qubits {
                    return Err(Error::DimensionMismatch(format!(
                        "detuning vector has length {}, register has {} qubits",
                        v.len(),
                        n_qubits
                    )));
                }
                Ok(v.clone())
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Delta::Uniform(d) => d.abs(),
            Delta::PerQubit(v) => v.iter().fold(0.0, |m, d| m.max(d.abs())),
        }
    }
}

/// One piecewise-constant control interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment {
    /// Rabi angular frequency, rad/µs, ≥ 0.
    pub omega: f64,
    /// Laser phase, rad.
    pub phi: f64,
    /// Detunings, rad/µs.
    pub delta: Delta,
    /// Duration in µs, > 0.
    pub duration: f64,
}

impl PulseSegment {
    pub fn new(omega: f64, phi: f64, delta: Delta, duration: f64) -> Result<Self> {
        if !(duration > 0.0) {
            return Err(Error::InvalidSegment("duration must be positive".into()));
        }
        if !(omega >= 0.0) {
            return Err(Error::InvalidSegment("omega must be non-negative".into()));
        }
        Ok(Self { omega, phi, delta, duration })
    }

    pub fn uniform(omega: f64, phi: f64, delta: f64, duration: f64) -> Result<Self> {
        Self::new(omega, phi, Delta::Uniform(delta), duration)
    }

    /// Box constraints for globally driven pulses: `Ω < J` and `|δ| < 2J`.
    pub fn is_global_constrained(&self, spec: &RegisterSpec) -> bool {
        let j = spec.nn_coupling();
        self.omega < j && self.delta.max_abs() < 2.0 * j
    }
}

/// Time-ordered pulse segments on a fixed register; `segments[0]` acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub register: RegisterSpec,
    pub segments: Vec<PulseSegment>,
}

impl PulseSequence {
    pub fn new(register: RegisterSpec, segments: Vec<PulseSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSegment("sequence must be non-empty".into()));
        }
        for seg in &segments {
            if let Delta::PerQubit(v) = &seg.delta {
                if v.len() != register.n_qubits {
                    return Err(Error::DimensionMismatch(format!(
                        "segment detuning length {} vs {} qubits",
                        v.len(),
                        register.n_qubits
                    )));
                }
            }
        }
        Ok(Self { register, segments })
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Same controls on a different register. Only sequences with uniform
    /// detunings transfer; per-qubit detunings are tied to specific sites.
    pub fn retarget(&self, register: RegisterSpec) -> Result<Self> {
        for seg in &self.segments {
            if matches!(seg.delta, Delta::PerQubit(_))
                && register.n_qubits != self.register.n_qubits
            {
                return Err(Error::DimensionMismatch(
                    "cannot retarget per-qubit detunings to a different size".into(),
                ));
            }
        }
        Self::new(register, self.segments.clone())
    }

    /// Rescale every segment duration by `scale`.
    pub fn rescaled(&self, scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::InvalidSegment("scale must be positive".into()));
        }
        let segments = self
            .segments
            .iter()
            .map(|s| PulseSegment { duration: s.duration * scale, ..s.clone() })
            .collect();
        Self::new(self.register.clone(), segments)
    }
}

/// Symmetric coupling matrix `K`, in rad/µs.
///
/// Full-tail mode: `K_ij = C6/r_ij^6` for every pair. Nearest-neighbour
/// mode: `J` on the register's NN edges, zero elsewhere.
pub fn coupling_matrix(spec: &RegisterSpec) -> Result<Array2<f64>> {
    let n = spec.n_qubits;
    let mut k = Array2::zeros((n, n));
    match spec.interaction {
        InteractionMode::NearestNeighbour => {
            let j = spec.nn_coupling();
            for (a, b) in spec.nn_edges() {
                k[(a, b)] = j;
                k[(b, a)] = j;
            }
        }
        InteractionMode::FullTail => {
            for a in 0..n {
                for b in (a + 1)..n {
                    let r = spec.distance(a, b);
                    if r < 1e-9 {
                        return Err(Error::DegenerateGeometry(a, b));
                    }
                    let kij = spec.c6 / r.powi(6);
                    k[(a, b)] = kij;
                    k[(b, a)] = kij;
                }
            }
        }
    }
    Ok(k)
}

/// Diagonal of the segment Hamiltonian over computational basis states:
/// interaction energy plus the `−δ_j σz_j / 2` longitudinal term.
pub fn diagonal_energies(spec: &RegisterSpec, delta: &[f64]) -> Result<Vec<f64>> {
    let n = spec.n_qubits;
    if delta.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "delta length {} vs {} qubits",
            delta.len(),
            n
        )));
    }
    let k = coupling_matrix(spec)?;
    let dim = 1usize << n;
    let mut diag = vec![0.0f64; dim];
    for (b, e) in diag.iter_mut().enumerate() {
        let mut energy = 0.0;
        for i in 0..n {
            let bi = (b >> i) & 1;
            // σz eigenvalue is +1 on |0⟩, −1 on |1⟩.
            energy -= 0.5 * delta[i] * (1.0 - 2.0 * bi as f64);
            if bi == 1 {
                for j in (i + 1)..n {
                    if (b >> j) & 1 == 1 {
                        energy += k[(i, j)];
                    }
                }
            }
        }
        *e = energy;
    }
    Ok(diag)
}

/// Dense Hamiltonian of one control segment,
/// `H = Σ_j (Ω/2)[cos Φ σx_j − sin Φ σy_j] − Σ_j (δ_j/2) σz_j + Σ_{i>j} K_ij n̂_i n̂_j`.
pub fn hamiltonian(spec: &RegisterSpec, seg: &PulseSegment) -> Result<CMat> {
    if spec.n_qubits > DENSE_QUBIT_CAP {
        return Err(Error::RegisterTooLarge { n_qubits: spec.n_qubits, cap: DENSE_QUBIT_CAP });
    }
    let n = spec.n_qubits;
    let dim = 1usize << n;
    let delta = seg.delta.to_vec(n)?;
    let diag = diagonal_energies(spec, &delta)?;

    let mut h: CMat = Array2::zeros((dim, dim));
    for (b, &e) in diag.iter().enumerate() {
        h[(b, b)] = Complex64::new(e, 0.0);
    }
    if seg.omega != 0.0 {
        // cos Φ σx − sin Φ σy = e^{iΦ}|0⟩⟨1| + e^{−iΦ}|1⟩⟨0| on each qubit.
        let raise = Complex64::from_polar(0.5 * seg.omega, seg.phi);
        for b in 0..dim {
            for j in 0..n {
                if (b >> j) & 1 == 1 {
                    h[(b ^ (1 << j), b)] += raise;
                } else {
                    h[(b ^ (1 << j), b)] += raise.conj();
                }
            }
        }
    }
    debug_assert!(crate::linalg::hermiticity_defect(&h) < 1e-12);
    Ok(h)
}
