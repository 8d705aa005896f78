// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Analog pulse synthesis and gate compilation for Rydberg-atom chains with
//! always-on van der Waals interactions.
//!
//! The crate simulates a register of neutral atoms driven by a global laser
//! (Rabi frequency `Ω`, phase `Φ`) with per-qubit detunings `δ_j`, under the
//! Ising-type Hamiltonian
//!
//! ```text
//! H = Σ_j (Ω/2)·[cos Φ σx_j − sin Φ σy_j] − Σ_j (δ_j/2)·σz_j
//!     + Σ_{i>j} K_ij n̂_i n̂_j,          K_ij = C6 / r_ij^6
//! ```
//!
//! and builds, on top of that model:
//!
//! - exact piecewise-constant propagators ([`propagator`]),
//! - gate and state fidelity metrics ([`metrics`]),
//! - a variational synthesizer for global ±π/2 rotation pulses ([`pulseopt`]),
//! - a compiler from digital gate layers (Rz, local Rx/Ry, CZ layers via
//!   refocusing, CNOT, SWAP, Givens-SWAP, SWAP networks) to pulse schedules
//!   ([`gatelib`]),
//! - a paired-electron VQE driver over those compiled gates ([`vqe`]).
//!
//! # Conventions
//!
//! Fixed globally and relied on throughout:
//!
//! - ħ = 1. Frequencies and energies are angular, in rad/µs; durations in µs.
//!   File formats at the CLI boundary use ordinary frequencies in MHz
//!   (ω = 2π·ν) — conversion happens exactly once, at ingest.
//! - Basis index `b` encodes `|q_{N−1} … q_1 q_0⟩` with qubit 0 the least
//!   significant bit. `|1⟩` is the Rydberg state: `n̂|1⟩ = |1⟩`,
//!   `σz|0⟩ = +|0⟩`, `σz|1⟩ = −|1⟩`, so `n̂ = (1 − σz)/2`.
//! - Rotations are `Rz(θ) = exp(−iθσz/2)` and likewise for x, y. `RX`/`RY`
//!   (uppercase) denote global rotations applied to every qubit, `Rx`/`Ry`
//!   per-qubit rotations.
//! - Time ordering: `segments[0]` acts first, so the sequence unitary is
//!   `U = U_k · … · U_1` with later segments multiplying on the left.

pub mod gatelib;
pub mod gates;
pub mod linalg;
pub mod metrics;
pub mod propagator;
pub mod pulseopt;
pub mod register;
pub mod schedule;
pub mod vqe;

use thiserror::Error;

/// Dense unitaries are only built up to this many qubits.
pub const DENSE_QUBIT_CAP: usize = 12;
/// State-vector evolution is supported up to this many qubits.
pub const STATE_QUBIT_CAP: usize = 20;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate geometry: atoms {0} and {1} coincide")]
    DegenerateGeometry(usize, usize),
    #[error("invalid register: {0}")]
    InvalidRegister(String),
    #[error("invalid pulse segment: {0}")]
    InvalidSegment(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("register too large for dense mode ({n_qubits} qubits, cap {cap})")]
    RegisterTooLarge { n_qubits: usize, cap: usize },
    #[error(
        "unrealizable CZ layer: on a periodic chain of {n_qubits} qubits only layers of \
         {parity} cardinality can be refocused"
    )]
    UnrealizableLayer { n_qubits: usize, parity: &'static str },
    #[error("CNOT({0},{1}) acts on non-adjacent qubits: requires SWAP routing")]
    RequiresSwapRouting(usize, usize),
    #[error("rotation library invalid: {0}")]
    InvalidRotationLibrary(String),
    #[error("optimizer exhausted {restarts} restarts; best loss {best_loss:.3e}")]
    OptimizerExhausted {
        restarts: usize,
        best_loss: f64,
        best: Box<(register::PulseSequence, pulseopt::OptimizationTrace)>,
    },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("unknown gate name: {0}")]
    UnknownGate(String),
    #[error("invalid fixture: {0}")]
    InvalidFixture(String),
    #[error("invalid schedule file: {0}")]
    InvalidSchedule(String),
    #[error("empty scan range")]
    EmptyScanRange,
    #[error("internal numerical guard tripped: {0}")]
    Numerics(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

// The book chapters double as doc-tests so the guide can never drift from
// the library. `cargo test --doc` runs every fenced Rust block in book/src.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hamiltonian.md")]
    mod hamiltonian {}
    #[doc = include_str!("../../../book/src/propagators.md")]
    mod propagators {}
    #[doc = include_str!("../../../book/src/pulse-synthesis.md")]
    mod pulse_synthesis {}
    #[doc = include_str!("../../../book/src/refocusing.md")]
    mod refocusing {}
    #[doc = include_str!("../../../book/src/swap-networks.md")]
    mod swap_networks {}
    #[doc = include_str!("../../../book/src/vqe.md")]
    mod vqe {}
}
