// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Compilation of digital gate layers into pulse schedules.
//!
//! Submodules: [`circuit`] (gate-layer IR and text format), [`refocus`]
//! (flip sets and δ* compensation), [`compile`] (the lowering itself),
//! [`network`] (SWAP networks), [`durations`] (symbolic gate-time ledger).

pub mod circuit;
pub mod compile;
pub mod durations;
pub mod network;
pub mod refocus;

pub use circuit::{CircuitIR, GateLayer};
pub use compile::{
    compile_circuit, compile_cnot, compile_cz_layer, compile_givens_swap,
    compile_local_rotation_layer, compile_rz_layer, compile_swap, equal_up_to_global_phase,
    givens_swap_ir, CompiledSchedule, LedgerEntry, RotationLibrary, ScheduleOp, TaggedOp,
};
pub use durations::{gate_duration, SchedParams};
pub use network::{
    brick_layer_pairs, givens_swap_network_circuit, meeting_point, network_gate_count,
    network_layers, network_permutation, swap_network_circuit,
};
pub use refocus::{conjugated_interaction, plan_refocus, RefocusPlan};
