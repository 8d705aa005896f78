// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lowering gate layers to pulse schedules.
//!
//! Every construction bottoms out in three primitives:
//!
//! - an exact Rz layer: one `Ω = 0` segment of duration `2π/J` with
//!   `δ_i = −θ_i / t` (exact on NN registers, approximate with the full
//!   interaction tail),
//! - a global ±π/2 rotation from the [`RotationLibrary`] — either an
//!   optimized pulse sequence or, for verification, the ideal matrix,
//! - a refocused drift: two `π/(2J)` halves with an X layer around the
//!   second and compensation detunings δ* inside it.
//!
//! Local rotations are basis-change sandwiches, e.g.
//! `Rx(θ⃗) = RY(π/2) · Rz(θ⃗) · RY(−π/2)` (matrix order). CNOT conjugates a
//! CZ by local Ry(±π/2) on the target; SWAP is three CNOTs; Givens-SWAP is
//! three CZs with interleaved local Ry layers (see [`givens_swap_ir`]).

use num_complex::Complex64;

use crate::gates::{self, Axis, RotationKind};
use crate::linalg::CMat;
use crate::metrics::gate_fidelity;
use crate::propagator::{
    evolve_state, segment_unitary, sequence_unitary, StateVector, Unitary,
};
use crate::pulseopt::derive_rotation_family;
use crate::register::{
    Delta, InteractionMode, PulseSegment, PulseSequence, RegisterSpec, TAU,
};
use crate::{Error, Result};

use super::circuit::{CircuitIR, GateLayer};
use super::refocus::plan_refocus;

/// The four global ±π/2 rotations a compilation draws on.
///
/// `Ideal` injects exact rotation matrices instead of pulses — the
/// verification mode that isolates refocusing and Rz exactness from pulse
/// quality.
#[derive(Debug, Clone)]
pub enum RotationLibrary {
    Ideal,
    Pulses {
        rx_plus: PulseSequence,
        rx_minus: PulseSequence,
        ry_plus: PulseSequence,
        ry_minus: PulseSequence,
    },
}

impl RotationLibrary {
    /// Derive all four rotations from one optimized sequence by constant
    /// phase shifts.
    pub fn from_base(base: &PulseSequence, kind: RotationKind) -> Result<Self> {
        let get = |to: RotationKind| derive_rotation_family(base, kind, to);
        Ok(RotationLibrary::Pulses {
            rx_plus: get(RotationKind::RxPlus)?,
            rx_minus: get(RotationKind::RxMinus)?,
            ry_plus: get(RotationKind::RyPlus)?,
            ry_minus: get(RotationKind::RyMinus)?,
        })
    }

    pub fn sequence(&self, kind: RotationKind) -> Option<&PulseSequence> {
        match self {
            RotationLibrary::Ideal => None,
            RotationLibrary::Pulses { rx_plus, rx_minus, ry_plus, ry_minus } => {
                Some(match kind {
                    RotationKind::RxPlus => rx_plus,
                    RotationKind::RxMinus => rx_minus,
                    RotationKind::RyPlus => ry_plus,
                    RotationKind::RyMinus => ry_minus,
                })
            }
        }
    }

    /// Trace fidelity of every member against its ideal rotation on the
    /// library's own register; gates built from the library inherit these.
    pub fn validate(&self, min_fidelity: f64) -> Result<Vec<(RotationKind, f64)>> {
        let mut report = Vec::new();
        if let RotationLibrary::Pulses { .. } = self {
            for kind in RotationKind::ALL {
                let seq = self.sequence(kind).unwrap();
                let ideal = gates::global_rotation(seq.register.n_qubits, kind)?;
                let f = gate_fidelity(&sequence_unitary(seq)?, &ideal)?.fidelity;
                if f < min_fidelity {
                    return Err(Error::InvalidRotationLibrary(format!(
                        "{kind} pulse reaches only {f:.5}, need {min_fidelity}"
                    )));
                }
                report.push((kind, f));
            }
        }
        Ok(report)
    }

}

/// One schedule element: a physical pulse segment, or an ideal rotation in
/// verification mode.
#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleOp {
    Pulse(PulseSegment),
    IdealRotation(RotationKind),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaggedOp {
    pub op: ScheduleOp,
    /// Provenance: which gate this element implements.
    pub tag: String,
}

/// Ledger entry: a compiled gate and the schedule time it actually takes.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub gate: String,
    pub duration_us: f64,
}

/// A pulse schedule with per-segment provenance and a duration ledger.
#[derive(Debug, Clone)]
pub struct CompiledSchedule {
    pub register: RegisterSpec,
    pub ops: Vec<TaggedOp>,
    pub ledger: Vec<LedgerEntry>,
    /// Set when a construction that is exact on NN registers was compiled
    /// against the full interaction tail.
    pub approximate: bool,
}

impl CompiledSchedule {
    pub fn empty(register: RegisterSpec) -> Self {
        Self { register, ops: Vec::new(), ledger: Vec::new(), approximate: false }
    }

    pub fn total_duration(&self) -> f64 {
        self.ops
            .iter()
            .map(|t| match &t.op {
                ScheduleOp::Pulse(seg) => seg.duration,
                ScheduleOp::IdealRotation(_) => 0.0,
            })
            .sum()
    }

    /// Append another compiled schedule (same register).
    pub fn extend(&mut self, other: CompiledSchedule) {
        self.ops.extend(other.ops);
        self.ledger.extend(other.ledger);
        self.approximate |= other.approximate;
    }

    /// All-physical schedules convert to a plain pulse sequence.
    pub fn to_pulse_sequence(&self) -> Result<PulseSequence> {
        let segments = self
            .ops
            .iter()
            .map(|t| match &t.op {
                ScheduleOp::Pulse(seg) => Ok(seg.clone()),
                ScheduleOp::IdealRotation(kind) => Err(Error::InvalidSchedule(format!(
                    "schedule contains an ideal {kind} and has no pulse realization"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        PulseSequence::new(self.register.clone(), segments)
    }

    /// Dense unitary of the schedule (within the dense cap).
    pub fn unitary(&self) -> Result<Unitary> {
        let mut u = Unitary::identity(self.register.n_qubits);
        for t in &self.ops {
            let step = match &t.op {
                ScheduleOp::Pulse(seg) => segment_unitary(&self.register, seg)?,
                ScheduleOp::IdealRotation(kind) => {
                    gates::global_rotation(self.register.n_qubits, *kind)?
                }
            };
            u = step.compose(&u)?;
        }
        Ok(u)
    }

    /// Matrix-free state evolution through the schedule.
    pub fn evolve(&self, psi0: &StateVector) -> Result<StateVector> {
        let n = self.register.n_qubits;
        let mut psi = psi0.clone();
        for t in &self.ops {
            psi = match &t.op {
                ScheduleOp::Pulse(seg) => {
                    let seq = PulseSequence::new(self.register.clone(), vec![seg.clone()])?;
                    evolve_state(&seq, &psi)?
                }
                ScheduleOp::IdealRotation(kind) => apply_global_rotation(&psi, n, *kind)?,
            };
        }
        Ok(psi)
    }

    /// Rescale the duration of every segment whose tag starts with `prefix`
    /// (detunings stay fixed, so Rz angles scale with the duration).
    pub fn rescale_tagged(&self, prefix: &str, scale: f64) -> Result<CompiledSchedule> {
        if !(scale > 0.0) {
            return Err(Error::InvalidSegment("scale must be positive".into()));
        }
        let mut out = self.clone();
        for t in out.ops.iter_mut() {
            if t.tag.starts_with(prefix) {
                if let ScheduleOp::Pulse(seg) = &mut t.op {
                    seg.duration *= scale;
                }
            }
        }
        Ok(out)
    }
}

fn apply_global_rotation(psi: &StateVector, n: usize, kind: RotationKind) -> Result<StateVector> {
    let u2: CMat = match kind.axis() {
        Axis::X => gates::rx(kind.sign().angle()),
        Axis::Y => gates::ry(kind.sign().angle()),
    };
    let mut amps = psi.amplitudes().clone();
    let dim = amps.len();
    for q in 0..n {
        let bit = 1usize << q;
        for b in 0..dim {
            if b & bit == 0 {
                let lo = amps[b];
                let hi = amps[b | bit];
                amps[b] = u2[(0, 0)] * lo + u2[(0, 1)] * hi;
                amps[b | bit] = u2[(1, 0)] * lo + u2[(1, 1)] * hi;
            }
        }
    }
    Ok(StateVector::from_amplitudes_unchecked(amps))
}

/// Reduce an angle to `(−2π, 2π]`, keeping `|δ| = |θ|/t ≤ J` inside the box.
fn reduce_angle(theta: f64) -> f64 {
    let two_tau = 2.0 * TAU;
    let mut t = theta % two_tau;
    if t > TAU {
        t -= two_tau;
    } else if t <= -TAU {
        t += two_tau;
    }
    t
}

/// Exact Rz layer: one zero-drive segment of duration `t = 2π/J` with
/// `δ_i = −θ_i/t`. The NN interaction phase over `t` is a multiple of 2π per
/// bond and drops out; the full tail leaves a residual error, flagged via
/// `approximate`.
pub fn compile_rz_layer(thetas: &[f64], spec: &RegisterSpec) -> Result<CompiledSchedule> {
    if thetas.len() != spec.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "{} angles for {} qubits",
            thetas.len(),
            spec.n_qubits
        )));
    }
    let t = TAU / spec.nn_coupling();
    let deltas: Vec<f64> = thetas.iter().map(|&th| -reduce_angle(th) / t).collect();
    let seg = PulseSegment::new(0.0, 0.0, Delta::PerQubit(deltas), t)?;
    Ok(CompiledSchedule {
        register: spec.clone(),
        ops: vec![TaggedOp { op: ScheduleOp::Pulse(seg), tag: "rz".into() }],
        ledger: vec![LedgerEntry { gate: "RZ".into(), duration_us: t }],
        approximate: spec.interaction == InteractionMode::FullTail,
    })
}

fn push_rotation(
    ops: &mut Vec<TaggedOp>,
    lib: &RotationLibrary,
    kind: RotationKind,
    spec: &RegisterSpec,
    tag: &str,
) -> Result<()> {
    match lib {
        RotationLibrary::Ideal => {
            ops.push(TaggedOp { op: ScheduleOp::IdealRotation(kind), tag: tag.into() });
        }
        RotationLibrary::Pulses { .. } => {
            let seq = lib.sequence(kind).unwrap().retarget(spec.clone())?;
            for seg in seq.segments {
                ops.push(TaggedOp { op: ScheduleOp::Pulse(seg), tag: tag.into() });
            }
        }
    }
    Ok(())
}

/// Basis-change sandwich for a layer of local rotations about x or y.
///
/// Time order (first element acts first):
/// `x`: `[RY(−π/2), Rz(θ⃗), RY(+π/2)]`, `y`: `[RX(+π/2), Rz(θ⃗), RX(−π/2)]`.
pub fn compile_local_rotation_layer(
    axis: Axis,
    thetas: &[f64],
    spec: &RegisterSpec,
    lib: &RotationLibrary,
) -> Result<CompiledSchedule> {
    if thetas.len() != spec.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "{} angles for {} qubits",
            thetas.len(),
            spec.n_qubits
        )));
    }
    let (pre, post, tag) = match axis {
        Axis::X => (RotationKind::RyMinus, RotationKind::RyPlus, "local-rx"),
        Axis::Y => (RotationKind::RxPlus, RotationKind::RxMinus, "local-ry"),
    };
    let mut ops = Vec::new();
    push_rotation(&mut ops, lib, pre, spec, tag)?;
    let rz = compile_rz_layer(thetas, spec)?;
    let approximate = rz.approximate;
    for mut t in rz.ops {
        t.tag = format!("{tag}:rz");
        ops.push(t);
    }
    push_rotation(&mut ops, lib, post, spec, tag)?;

    let duration: f64 = ops
        .iter()
        .map(|t| match &t.op {
            ScheduleOp::Pulse(s) => s.duration,
            ScheduleOp::IdealRotation(_) => 0.0,
        })
        .sum();
    let gate = match axis {
        Axis::X => "RX",
        Axis::Y => "RY",
    };
    Ok(CompiledSchedule {
        register: spec.clone(),
        ops,
        ledger: vec![LedgerEntry { gate: gate.into(), duration_us: duration }],
        approximate,
    })
}

/// Refocused CZ layer.
///
/// Time order: drift `t/2` under the bare interactions, X layer on the flip
/// set, drift `t/2` with the compensation detunings δ*, X layer again. With
/// an empty flip set the whole layer is a single `π/J` drift. X layers are
/// local Rx(π) sandwiches on the flip set.
pub fn compile_cz_layer(
    target_edges: &[(usize, usize)],
    spec: &RegisterSpec,
    lib: &RotationLibrary,
) -> Result<CompiledSchedule> {
    let plan = plan_refocus(target_edges, spec)?;
    let n = spec.n_qubits;
    let mut ops: Vec<TaggedOp> = Vec::new();

    if plan.flips.iter().all(|&f| !f) {
        // Nothing to refocus: the full drift alone realizes every NN edge.
        let seg = PulseSegment::uniform(0.0, 0.0, 0.0, 2.0 * plan.half_duration)?;
        ops.push(TaggedOp { op: ScheduleOp::Pulse(seg), tag: "cz:drift".into() });
    } else {
        let x_angles: Vec<f64> = plan
            .flips
            .iter()
            .map(|&f| if f { std::f64::consts::PI } else { 0.0 })
            .collect();

        let drift1 = PulseSegment::uniform(0.0, 0.0, 0.0, plan.half_duration)?;
        ops.push(TaggedOp { op: ScheduleOp::Pulse(drift1), tag: "cz:drift".into() });

        let x_layer = compile_local_rotation_layer(Axis::X, &x_angles, spec, lib)?;
        for mut t in x_layer.ops.clone() {
            t.tag = format!("cz:x|{}", t.tag);
            ops.push(t);
        }

        let drift2 = PulseSegment::new(
            0.0,
            0.0,
            Delta::PerQubit(plan.delta_star.clone()),
            plan.half_duration,
        )?;
        ops.push(TaggedOp { op: ScheduleOp::Pulse(drift2), tag: "cz:drift*".into() });

        for mut t in x_layer.ops {
            t.tag = format!("cz:x|{}", t.tag);
            ops.push(t);
        }
    }

    let duration: f64 = ops
        .iter()
        .map(|t| match &t.op {
            ScheduleOp::Pulse(s) => s.duration,
            ScheduleOp::IdealRotation(_) => 0.0,
        })
        .sum();
    let _ = n;
    Ok(CompiledSchedule {
        register: spec.clone(),
        ops,
        ledger: vec![LedgerEntry { gate: format!("CZ{target_edges:?}"), duration_us: duration }],
        approximate: spec.interaction == InteractionMode::FullTail,
    })
}

fn require_nn_edge(spec: &RegisterSpec, a: usize, b: usize) -> Result<()> {
    let e = normalize(a, b);
    if !spec.nn_edges().iter().any(|&(x, y)| normalize(x, y) == e) {
        return Err(Error::RequiresSwapRouting(a, b));
    }
    Ok(())
}

fn normalize(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// CNOT = local Ry(π/2) on the target · CZ · local Ry(−π/2) on the target
/// (matrix order).
pub fn compile_cnot(
    control: usize,
    target: usize,
    spec: &RegisterSpec,
    lib: &RotationLibrary,
) -> Result<CompiledSchedule> {
    require_nn_edge(spec, control, target)?;
    let n = spec.n_qubits;
    let mut pre = vec![0.0; n];
    pre[target] = -std::f64::consts::FRAC_PI_2;
    let mut post = vec![0.0; n];
    post[target] = std::f64::consts::FRAC_PI_2;

    let mut out = CompiledSchedule::empty(spec.clone());
    out.extend(compile_local_rotation_layer(Axis::Y, &pre, spec, lib)?);
    out.extend(compile_cz_layer(&[(control, target)], spec, lib)?);
    out.extend(compile_local_rotation_layer(Axis::Y, &post, spec, lib)?);
    let duration = out.total_duration();
    out.ledger = vec![LedgerEntry { gate: format!("CNOT({control},{target})"), duration_us: duration }];
    Ok(out)
}

/// SWAP = CNOT(i,j) · CNOT(j,i) · CNOT(i,j).
pub fn compile_swap(
    a: usize,
    b: usize,
    spec: &RegisterSpec,
    lib: &RotationLibrary,
) -> Result<CompiledSchedule> {
    let mut out = CompiledSchedule::empty(spec.clone());
    out.extend(compile_cnot(a, b, spec, lib)?);
    out.extend(compile_cnot(b, a, spec, lib)?);
    out.extend(compile_cnot(a, b, spec, lib)?);
    let duration = out.total_duration();
    out.ledger = vec![LedgerEntry { gate: format!("SWAP({a},{b})"), duration_us: duration }];
    Ok(out)
}

/// The CZ + local-Ry circuit equal to `GS(θ)` on the pair `(hi, lo)`.
///
/// Derived by folding the Givens rotation's controlled-Ry into the 3-CNOT
/// SWAP and merging adjacent single-qubit rotations; the unit test checks it
/// against the `GS(θ)` matrix for many angles.
pub fn givens_swap_ir(n: usize, hi: usize, lo: usize, theta: f64) -> Result<CircuitIR> {
    if hi >= n || lo >= n || hi == lo {
        return Err(Error::InvalidCircuit(format!("invalid pair ({hi},{lo})")));
    }
    let pi_2 = std::f64::consts::FRAC_PI_2;
    let mut l1 = vec![0.0; n];
    l1[lo] = -pi_2;
    let mut l2 = vec![0.0; n];
    l2[lo] = pi_2;
    l2[hi] = theta - pi_2;
    let mut l3 = vec![0.0; n];
    l3[lo] = -pi_2;
    l3[hi] = pi_2 - theta;
    let mut l4 = vec![0.0; n];
    l4[lo] = pi_2;
    let edge = vec![(hi, lo)];
    Ok(CircuitIR::new(vec![
        GateLayer::LocalRotationLayer(Axis::Y, l1),
        GateLayer::CzLayer(edge.clone()),
        GateLayer::LocalRotationLayer(Axis::Y, l2),
        GateLayer::CzLayer(edge.clone()),
        GateLayer::LocalRotationLayer(Axis::Y, l3),
        GateLayer::CzLayer(edge),
        GateLayer::LocalRotationLayer(Axis::Y, l4),
    ]))
}

/// Givens-SWAP on `(hi, lo)`: three CZs with interleaved local Ry layers.
pub fn compile_givens_swap(
    hi: usize,
    lo: usize,
    theta: f64,
    spec: &RegisterSpec,
    lib: &RotationLibrary,
) -> Result<CompiledSchedule> {
    require_nn_edge(spec, hi, lo)?;
    let ir = givens_swap_ir(spec.n_qubits, hi, lo, theta)?;
    let mut out = compile_circuit(&ir, spec, lib)?;
    let duration = out.total_duration();
    out.ledger =
        vec![LedgerEntry { gate: format!("GSWAP({hi},{lo},{theta:.4})"), duration_us: duration }];
    Ok(out)
}

/// Compile a whole circuit, concatenating per-layer schedules.
pub fn compile_circuit(
    ir: &CircuitIR,
    spec: &RegisterSpec,
    lib: &RotationLibrary,
) -> Result<CompiledSchedule> {
    ir.validate(spec)?;
    let mut out = CompiledSchedule::empty(spec.clone());
    for layer in &ir.layers {
        match layer {
            GateLayer::RzLayer(thetas) => out.extend(compile_rz_layer(thetas, spec)?),
            GateLayer::LocalRotationLayer(axis, thetas) => {
                out.extend(compile_local_rotation_layer(*axis, thetas, spec, lib)?)
            }
            GateLayer::GlobalRot(kind) => {
                let mut ops = Vec::new();
                push_rotation(&mut ops, lib, *kind, spec, "globalrot")?;
                let duration: f64 = ops
                    .iter()
                    .map(|t| match &t.op {
                        ScheduleOp::Pulse(s) => s.duration,
                        ScheduleOp::IdealRotation(_) => 0.0,
                    })
                    .sum();
                out.ops.extend(ops);
                out.ledger.push(LedgerEntry {
                    gate: format!("GLOBALROT {kind}"),
                    duration_us: duration,
                });
            }
            GateLayer::CzLayer(edges) => out.extend(compile_cz_layer(edges, spec, lib)?),
            GateLayer::Cnot(c, t) => out.extend(compile_cnot(*c, *t, spec, lib)?),
            GateLayer::Swap(a, b) => out.extend(compile_swap(*a, *b, spec, lib)?),
            GateLayer::GivensSwap(a, b, theta) => {
                out.extend(compile_givens_swap(*a, *b, *theta, spec, lib)?)
            }
            GateLayer::Barrier => {
                out.ledger.push(LedgerEntry { gate: "BARRIER".into(), duration_us: 0.0 });
            }
        }
    }
    Ok(out)
}

// Used by unit tests below and by the fidelity helpers in the CLI.
pub fn schedule_fidelity(schedule: &CompiledSchedule, target: &Unitary) -> Result<f64> {
    Ok(gate_fidelity(&schedule.unitary()?, target)?.fidelity)
}

/// Convenience: the Hermitian-phase test whether two unitaries agree up to a
/// global phase, used across the gate tests.
pub fn equal_up_to_global_phase(a: &Unitary, b: &Unitary, tol: f64) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..a.dim() {
        for k in 0..a.dim() {
            tr += b.mat()[(k, i)].conj() * a.mat()[(k, i)];
        }
    }
    if tr.norm() < 1e-12 {
        return false;
    }
    let align = Complex64::from_polar(1.0, -tr.arg());
    crate::linalg::max_abs_diff(&a.mat().mapv(|z| z * align), b.mat()) < tol
}
