// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fidelity and diagnostic metrics.
//!
//! [`gate_fidelity`] is the trace fidelity `F = |tr(G†U)| / dim`, invariant
//! under a global phase of either argument. [`state_overlap`] is the cheaper
//! large-register metric `F̃ = |⟨0…0| G† U_seq |0…0⟩|`; the modulus makes it
//! comparable to percentage fidelities. [`magnetization_profile`] reports
//! per-qubit `⟨σz⟩`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gates::GateTarget;
use crate::propagator::{evolve_state, StateVector, Unitary};
use crate::register::PulseSequence;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Trace,
    StateOverlap,
}

/// A fidelity with its loss, `L = 1 − F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub fidelity: f64,
    pub loss: f64,
    pub metric_kind: MetricKind,
}

impl FidelityReport {
    fn new(fidelity: f64, metric_kind: MetricKind) -> Result<Self> {
        if !((-1e-12..=1.0 + 1e-12).contains(&fidelity)) {
            return Err(Error::Numerics(format!("fidelity {fidelity} out of [0,1]")));
        }
        Ok(Self { fidelity, loss: 1.0 - fidelity, metric_kind })
    }
}

/// Trace fidelity `F = |tr(G†U)| / dim`.
pub fn gate_fidelity(u: &Unitary, g: &Unitary) -> Result<FidelityReport> {
    if u.dim() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "unitaries of dimension {} and {}",
            u.dim(),
            g.dim()
        )));
    }
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..u.dim() {
        for k in 0..u.dim() {
            tr += g.mat()[(k, i)].conj() * u.mat()[(k, i)];
        }
    }
    FidelityReport::new(tr.norm() / u.dim() as f64, MetricKind::Trace)
}

/// Overlap metric `F̃ = |⟨0…0| G† U_seq |0…0⟩|`, evaluated through the
/// matrix-free state path so it works beyond the dense cap.
pub fn state_overlap(seq: &PulseSequence, target: &GateTarget) -> Result<FidelityReport> {
    let n = seq.register.n_qubits;
    let evolved = evolve_state(seq, &StateVector::zero_state(n))?;
    let reference = target.target_state(n)?;
    state_overlap_of_states(&evolved, &reference)
}

/// Overlap of two prepared states.
pub fn state_overlap_of_states(
    psi: &StateVector,
    reference: &StateVector,
) -> Result<FidelityReport> {
    let f = reference.inner(psi)?.norm();
    // Guard against tiny norm drift in long evolutions.
    FidelityReport::new(f.min(1.0 + 1e-12), MetricKind::StateOverlap)
}

/// Per-qubit `⟨σz⟩ ∈ [−1, 1]`; `+1` on `|0⟩` under this crate's convention.
pub fn magnetization_profile(psi: &StateVector) -> Vec<f64> {
    let n = psi.n_qubits();
    let mut mags = vec![0.0f64; n];
    for (b, amp) in psi.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        for (j, m) in mags.iter_mut().enumerate() {
            *m += p * (1.0 - 2.0 * ((b >> j) & 1) as f64);
        }
    }
    mags
}
