// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: the headline numbers this crate stands behind.
//!
//! Each test prints one `ACCEPTANCE <n>: PASS — …` line (run with
//! `--nocapture` to see them) and pins its tolerances in code. Everything
//! is seeded; the optimizer-dependent criteria share one synthesized
//! rotation library through a `OnceLock`.

use std::sync::OnceLock;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pulsegate::gatelib::{
    compile_cnot, compile_cz_layer, compile_rz_layer, compile_swap, conjugated_interaction,
    gate_duration, network_gate_count, network_layers,
    network_permutation, plan_refocus, CompiledSchedule, RotationLibrary, SchedParams,
};
use pulsegate::gates::{self, GateTarget, RotationKind};
use pulsegate::linalg::{self, CMat};
use pulsegate::metrics::{gate_fidelity, magnetization_profile, state_overlap_of_states};
use pulsegate::propagator::{evolve_state, sequence_unitary, StateVector, Unitary};
use pulsegate::pulseopt::{
    optimize_global_rotation, refine_duration, OptimizerConfig, ScanMetric,
};
use pulsegate::register::{
    hamiltonian, Delta, Geometry, InteractionMode, PulseSegment, PulseSequence, RegisterSpec,
    TAU,
};
use pulsegate::vqe::{
    energy, hartree_fock_state, run_vqe, AnsatzSpec, Backend, PairedHamiltonian, SegmentCache,
    VqeConfig,
};

/// Reference hardware parameters: rubidium 60S coefficient, 6.24 µm
/// spacing, J = C6/r⁶ ≈ 2π × 2.34 MHz.
const C6: f64 = TAU * 138_000.0;
const SPACING: f64 = 6.24;

/// Seed for the shared criterion-3 optimization run.
const OPT_SEED: u64 = 1;
/// Loss threshold the restart loop must beat for the shared pulse.
const OPT_THRESHOLD: f64 = 1.15e-3;

fn reg(n: usize, geometry: Geometry, interaction: InteractionMode) -> RegisterSpec {
    RegisterSpec::new(n, geometry, SPACING, C6, interaction).unwrap()
}

fn pass(criterion: usize, detail: &str) {
    println!("ACCEPTANCE {criterion}: PASS — {detail}");
}

/// The criterion-3 pulse: global RX(π/2) synthesized on the 4-qubit NN PBC
/// register with 2³ segments of dt = 1.6/J.
fn optimized_pulse() -> &'static (PulseSequence, f64) {
    static PULSE: OnceLock<(PulseSequence, f64)> = OnceLock::new();
    PULSE.get_or_init(|| {
        let spec = reg(4, Geometry::ChainPbc, InteractionMode::NearestNeighbour);
        let j = spec.nn_coupling();
        let target = gates::global_rotation(4, RotationKind::RxPlus).unwrap();
        let cfg = OptimizerConfig {
            p_max: 3,
            dt: 1.6 / j,
            threshold: OPT_THRESHOLD,
            max_restarts: 20,
            rng_seed: OPT_SEED,
            max_iters: 500,
        };
        let (seq, trace) = optimize_global_rotation(&target, &spec, &cfg)
            .expect("criterion-3 optimization must converge within 20 restarts");
        (seq, trace.final_loss)
    })
}

/// Rotation library shared by the compiled-gate criteria, derived from the
/// criterion-3 pulse by constant phase shifts.
fn rotation_library() -> &'static RotationLibrary {
    static LIB: OnceLock<RotationLibrary> = OnceLock::new();
    LIB.get_or_init(|| {
        let (base, _) = optimized_pulse();
        let lib = RotationLibrary::from_base(base, RotationKind::RxPlus).unwrap();
        lib.validate(0.995).unwrap();
        lib
    })
}

#[test]
fn criterion_01_rz_exactness_on_nn_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst: f64 = 1.0;
    for n in 2..=8usize {
        for geometry in [Geometry::ChainObc, Geometry::ChainPbc] {
            let spec = reg(n, geometry, InteractionMode::NearestNeighbour);
            for _ in 0..50 {
                let thetas: Vec<f64> =
                    (0..n).map(|_| rng.gen_range(-2.0 * TAU..2.0 * TAU)).collect();
                let sched = compile_rz_layer(&thetas, &spec).unwrap();
                let target = gates::rz_layer(&thetas).unwrap();
                let f = gate_fidelity(&sched.unitary().unwrap(), &target).unwrap().fidelity;
                worst = worst.min(f);
                assert!(
                    f >= 1.0 - 1e-9,
                    "Rz layer fidelity {f} at n={n} {geometry:?}"
                );
            }
        }
    }
    pass(1, &format!("Rz layers exact on NN chains, worst fidelity 1 − {:.1e}", 1.0 - worst));
}

#[test]
fn criterion_02_refocusing_oracle() {
    // (a) Conjugation bookkeeping vs direct matrix conjugation, exhaustive
    // flip sets on chains up to 8 qubits, both boundary conditions.
    let mut worst_defect: f64 = 0.0;
    for n in 2..=8usize {
        for geometry in [Geometry::ChainObc, Geometry::ChainPbc] {
            let spec = reg(n, geometry, InteractionMode::NearestNeighbour);
            let seg = PulseSegment::uniform(0.0, 0.0, 0.0, 1.0).unwrap();
            let h = hamiltonian(&spec, &seg).unwrap();
            for mask in 0..(1usize << n) {
                let flips: Vec<bool> = (0..n).map(|q| (mask >> q) & 1 == 1).collect();
                let (signed, linear, constant) =
                    conjugated_interaction(&spec, &flips).unwrap();
                let xs = gates::x_on(
                    n,
                    &(0..n).filter(|q| flips[*q]).collect::<Vec<_>>(),
                )
                .unwrap();
                let conj = xs.mat().dot(&h.dot(xs.mat()));
                let dim = 1usize << n;
                let mut analytic: CMat = Array2::zeros((dim, dim));
                for b in 0..dim {
                    let mut e = constant;
                    for i in 0..n {
                        if (b >> i) & 1 == 1 {
                            e += linear[i];
                            for j in (i + 1)..n {
                                if (b >> j) & 1 == 1 {
                                    e += signed[(i, j)];
                                }
                            }
                        }
                    }
                    analytic[(b, b)] = Complex64::new(e, 0.0);
                }
                let defect = linalg::max_abs_diff(&conj, &analytic);
                worst_defect = worst_defect.max(defect);
                assert!(defect < 1e-12, "bookkeeping defect {defect} n={n} S={mask:b}");
            }
        }
    }

    // (b) Every realizable CZ layer with ideal X layers is exact, exhaustive
    // over edge subsets up to 7 qubits.
    let mut layers_checked = 0usize;
    for n in 2..=7usize {
        for geometry in [Geometry::ChainObc, Geometry::ChainPbc] {
            let spec = reg(n, geometry, InteractionMode::NearestNeighbour);
            let edges = spec.nn_edges();
            for mask in 0..(1u32 << edges.len()) {
                let target: Vec<(usize, usize)> = edges
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| (mask >> k) & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                match plan_refocus(&target, &spec) {
                    Err(_) => continue,
                    Ok(_) => {}
                }
                let sched =
                    compile_cz_layer(&target, &spec, &RotationLibrary::Ideal).unwrap();
                let ideal = gates::cz_product(n, &target).unwrap();
                let f = gate_fidelity(&sched.unitary().unwrap(), &ideal).unwrap().fidelity;
                assert!(
                    f >= 1.0 - 1e-9,
                    "CZ layer {target:?} on n={n} {geometry:?}: fidelity {f}"
                );
                layers_checked += 1;
            }
        }
    }
    pass(
        2,
        &format!(
            "conjugation oracle exact (max defect {worst_defect:.1e}); {layers_checked} CZ layers exact with ideal X layers"
        ),
    );
}

#[test]
fn criterion_03_rotation_synthesis_and_transfer() {
    let (pulse, loss) = optimized_pulse();
    let f_pbc = 1.0 - loss;
    assert!(f_pbc >= 0.995, "PBC fidelity {f_pbc}");

    let mut transfer = Vec::new();
    for n in 5..=8usize {
        let obc = reg(n, Geometry::ChainObc, InteractionMode::NearestNeighbour);
        let re = pulse.retarget(obc).unwrap();
        let target = gates::global_rotation(n, RotationKind::RxPlus).unwrap();
        let f = gate_fidelity(&sequence_unitary(&re).unwrap(), &target).unwrap().fidelity;
        assert!(f >= 0.997, "OBC N={n} fidelity {f}");
        transfer.push(format!("N={n}: {:.4}", f));
    }
    pass(
        3,
        &format!(
            "RX(π/2) on 4q PBC at F = {:.5} (reference 0.9992); OBC re-evaluation {}",
            f_pbc,
            transfer.join(", ")
        ),
    );
}

#[test]
fn criterion_04_cz_layers_with_compiled_pulses() {
    let lib = rotation_library();
    let pbc = reg(4, Geometry::ChainPbc, InteractionMode::NearestNeighbour);
    let obc = reg(4, Geometry::ChainObc, InteractionMode::NearestNeighbour);
    let cases: [(&RegisterSpec, &str, Vec<(usize, usize)>, f64); 4] = [
        (&pbc, "PBC CZ(0,1)CZ(2,3)", vec![(0, 1), (2, 3)], 0.996),
        (&pbc, "PBC CZ(0,1)CZ(1,2)", vec![(0, 1), (1, 2)], 0.997),
        (&obc, "OBC CZ(0,1)", vec![(0, 1)], 0.997),
        (&obc, "OBC CZ(1,2)", vec![(1, 2)], 0.996),
    ];
    let mut report = Vec::new();
    let mut misses = Vec::new();
    for (spec, name, edges, target) in cases {
        let sched = compile_cz_layer(&edges, spec, lib).unwrap();
        let ideal = gates::cz_product(4, &edges).unwrap();
        let f = gate_fidelity(&sched.unitary().unwrap(), &ideal).unwrap().fidelity;
        report.push(format!("{name}: {:.4} (reference {target})", f));
        if (f - target).abs() > 0.005 {
            misses.push(format!("{name}: {f:.4} outside {target} ± 0.005"));
        }
    }
    println!("criterion 4 compiled CZ layers: {}", report.join("; "));
    assert!(
        misses.is_empty(),
        "compiled CZ-layer fidelities off the reference values: {}. The shortfall \
         tracks the rotation library's coherent residual (per-rotation loss ≈ 1.1e-3, \
         concentrated in bond XX/ZZ channels that add across the refocusing sandwiches).",
        misses.join("; ")
    );
    pass(4, &report.join("; "));
}

#[test]
fn criterion_05_duration_table() {
    let params = SchedParams::default();
    let rows: [(&str, f64); 7] = [
        ("RZ", 0.4),
        ("GLOBALROT", 0.9),
        ("LOCALROT", 2.1),
        ("CZ", 4.5),
        ("CNOT", 6.2),
        ("SWAP", 18.7),
        ("GSWAP", 22.1),
    ];
    let mut report = Vec::new();
    for (gate, expected) in rows {
        let d = gate_duration(gate, &params).unwrap();
        assert!(
            (d - expected).abs() < 0.1,
            "{gate}: {d:.4} µs vs tabulated {expected} µs"
        );
        report.push(format!("{gate} {:.3}", d));
    }
    pass(5, &format!("durations within 0.1 µs of the reference table: {}", report.join(", ")));
}

#[test]
fn criterion_06_long_range_retuning_scans() {
    let full8 = reg(8, Geometry::ChainObc, InteractionMode::FullTail);

    // Rz layer benchmark at |δ| = J: θ just below −2π keeps the detuning on
    // the +J branch, whose linear error trades against the interaction
    // tail's mean field under rescaling.
    let theta = -(TAU - 1e-9);
    let thetas = vec![theta; 8];
    let sched = compile_rz_layer(&thetas, &full8).unwrap();
    assert!(sched.approximate);
    let rz_seq = sched.to_pulse_sequence().unwrap();
    let scan = refine_duration(
        &rz_seq,
        &ScanMetric::Trace(GateTarget::RzLayer(thetas)),
        (0.9, 1.02),
        61,
    )
    .unwrap();
    let at_unit = scan
        .points
        .iter()
        .min_by(|a, b| {
            (a.scale - 1.0).abs().partial_cmp(&(b.scale - 1.0).abs()).unwrap()
        })
        .unwrap();
    assert!(
        (at_unit.fidelity - 0.989).abs() <= 0.005,
        "full-tail Rz at NN-exact duration: {:.5}",
        at_unit.fidelity
    );
    assert!(
        scan.best.fidelity >= 0.993,
        "full-tail Rz scan maximum {:.5}",
        scan.best.fidelity
    );

    // Global rotation scan.
    let (pulse, _) = optimized_pulse();
    let rot8 = pulse.retarget(full8).unwrap();
    let rot_scan = refine_duration(
        &rot8,
        &ScanMetric::Trace(GateTarget::Global(RotationKind::RxPlus)),
        (0.85, 1.1),
        51,
    )
    .unwrap();
    assert!(
        rot_scan.best.fidelity >= 0.982,
        "global-rotation scan maximum {:.5}",
        rot_scan.best.fidelity
    );
    pass(
        6,
        &format!(
            "full-tail 8q: Rz {:.4} at NN duration, {:.4} retuned (scale {:.3}); rotation {:.4} retuned (scale {:.3})",
            at_unit.fidelity,
            scan.best.fidelity,
            scan.best.scale,
            rot_scan.best.fidelity,
            rot_scan.best.scale
        ),
    );
}

#[test]
fn criterion_07_eighteen_qubit_transfer() {
    let full18 = reg(18, Geometry::ChainObc, InteractionMode::FullTail);
    let lib = rotation_library();

    // Global RY(π/2) overlap through the matrix-free path.
    let ry = lib.sequence(RotationKind::RyPlus).unwrap().retarget(full18.clone()).unwrap();
    let psi = evolve_state(&ry, &StateVector::zero_state(18)).unwrap();
    let target_state = GateTarget::Global(RotationKind::RyPlus).target_state(18).unwrap();
    let f_rot = state_overlap_of_states(&psi, &target_state).unwrap().fidelity;
    assert!(f_rot >= 0.95, "N=18 global rotation overlap {f_rot:.4}");

    // Per-qubit ⟨σz⟩ after RY(π/2) from |0…0⟩ is near zero everywhere.
    let mags = magnetization_profile(&psi);
    assert!(mags.iter().all(|m| m.abs() < 0.2), "RY profile {mags:?}");

    // Local X on qubit 8 with the Rz segment retuned; scan a narrow window
    // below the NN-exact duration and keep the best overlap.
    let mut thetas = vec![0.0; 18];
    thetas[8] = std::f64::consts::PI;
    let sched = pulsegate::gatelib::compile_local_rotation_layer(
        gates::Axis::X,
        &thetas,
        &full18,
        lib,
    )
    .unwrap();
    let x8_target = GateTarget::LocalX(8).target_state(18).unwrap();
    let mut best = (0.0f64, 1.0f64);
    let mut best_state: Option<StateVector> = None;
    for k in 0..=8 {
        let scale = 0.92 + 0.02 * k as f64;
        let rescaled = sched.rescale_tagged("local-rx:rz", scale).unwrap();
        let seq = rescaled.to_pulse_sequence().unwrap();
        let psi = evolve_state(&seq, &StateVector::zero_state(18)).unwrap();
        let f = state_overlap_of_states(&psi, &x8_target).unwrap().fidelity;
        if f > best.0 {
            best = (f, scale);
            best_state = Some(psi);
        }
    }
    assert!(best.0 >= 0.91, "N=18 local X8 retuned overlap {:.4}", best.0);

    // Magnetization flips sign at qubit 8 and nowhere else.
    let mags = magnetization_profile(&best_state.unwrap());
    assert!(mags[8] < -0.5, "X8 magnetization {mags:?}");
    for (q, m) in mags.iter().enumerate() {
        if q != 8 {
            assert!(*m > 0.5, "X8 magnetization leaked to qubit {q}: {mags:?}");
        }
    }
    pass(
        7,
        &format!(
            "N=18 full tail: RY(π/2) overlap {:.4}; local X8 overlap {:.4} at Rz scale {:.2}; magnetization flip localized",
            f_rot, best.0, best.1
        ),
    );
}

#[test]
fn criterion_08_swap_network_long_range_cnot() {
    // Ideal-gate network checks: exact reversal, every pair once.
    for n in 2..=8usize {
        let perm = network_permutation(n);
        let expect: Vec<usize> = (0..n).rev().collect();
        assert_eq!(perm, expect, "network permutation at n={n}");
        let total: usize = network_layers(n).iter().map(|l| l.len()).sum();
        assert_eq!(total, network_gate_count(n));
    }

    // Compiled long-range CNOT(0,3) on the open 4-chain: route label 3 next
    // to label 0 with two SWAPs, apply the CNOT, unwind.
    let obc = reg(4, Geometry::ChainObc, InteractionMode::NearestNeighbour);
    let lib = rotation_library();
    let mut net = CompiledSchedule::empty(obc.clone());
    net.extend(compile_swap(2, 3, &obc, lib).unwrap());
    net.extend(compile_swap(1, 2, &obc, lib).unwrap());
    net.extend(compile_cnot(0, 1, &obc, lib).unwrap());
    net.extend(compile_swap(1, 2, &obc, lib).unwrap());
    net.extend(compile_swap(2, 3, &obc, lib).unwrap());
    let ideal = gates::cnot(4, 0, 3).unwrap();
    let f = gate_fidelity(&net.unitary().unwrap(), &ideal).unwrap().fidelity;
    println!(
        "criterion 8: ideal network checks pass (reversal, all-pairs adjacency, n ≤ 8); \
         compiled long-range CNOT(0,3): F = {f:.4} over {:.1} µs",
        net.total_duration()
    );
    assert!(
        (0.92..=0.96).contains(&f),
        "long-range CNOT(0,3) via compiled SWAP network: fidelity {f:.4} outside 0.94 ± 0.02. \
         The route stacks ~100 rotation pulses; with the best synthesizable pulses \
         (per-rotation loss ≈ 1.1e-3) their coherent bond-error channels add nearly \
         linearly across repeated sandwiches, and even perfect decorrelation \
         (quadrature addition) would bound the network at ≈ 0.89 — inside-window \
         fidelity requires per-rotation loss ≤ 8e-4 with benign error structure."
    );
    pass(
        8,
        &format!(
            "ideal network reverses order for n ≤ 8; compiled long-range CNOT(0,3) at F = {:.4} ({:.1} µs)",
            f,
            net.total_duration()
        ),
    );
}

#[test]
fn criterion_09_vqe_accuracy_and_invariants() {
    let h2_text = include_str!("../fixtures/h2_631g_paired.json");
    let lih_text = include_str!("../fixtures/lih_sto3g_paired.json");
    // Ingest itself enforces number symmetry and the reference energy.
    let h2 = PairedHamiltonian::from_json(h2_text).unwrap();
    let lih = PairedHamiltonian::from_json(lih_text).unwrap();

    // Ideal backend reaches chemical accuracy at depth 4.
    let ansatz = AnsatzSpec { n_qubits: 4, depth: 4, backend: Backend::Ideal };
    let ideal = run_vqe(&h2, &ansatz, &VqeConfig::default()).unwrap();
    assert!(
        ideal.error.abs() < 1.6e-3,
        "ideal VQE error {:.3} mHa",
        ideal.error * 1e3
    );
    assert!(ideal.final_energy >= h2.reference_energy - 1e-9, "variational bound violated");
    for w in ideal.trace.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "best-so-far trace must be non-increasing");
    }

    // Number conservation along the ideal ansatz for random angles.
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    for (h, n, pairs) in [(&h2, 4usize, 1usize), (&lih, 6, 2)] {
        let spec = AnsatzSpec { n_qubits: n, depth: n, backend: Backend::Ideal };
        let thetas: Vec<f64> =
            (0..spec.parameter_count()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let hf = hartree_fock_state(n, pairs).unwrap();
        let mut cache = SegmentCache::default();
        let psi = pulsegate::vqe::apply_ansatz(&spec, &thetas, &hf, &mut cache).unwrap();
        let total: f64 =
            magnetization_profile(&psi).iter().map(|m| (1.0 - m) / 2.0).sum();
        assert!((total - pairs as f64).abs() < 1e-10, "pair number drifted: {total}");
        let e = energy(h, &psi).unwrap();
        assert!(e >= h.reference_energy - 1e-9);
    }

    // Analog backend on the H2 fixture: compiled pulses, same optimizer.
    let spec4 = reg(4, Geometry::ChainObc, InteractionMode::NearestNeighbour);
    let analog = AnsatzSpec {
        n_qubits: 4,
        depth: 4,
        backend: Backend::Analog { spec: spec4, lib: rotation_library().clone() },
    };
    let analog_run = run_vqe(&h2, &analog, &VqeConfig::default()).unwrap();
    println!(
        "criterion 9: ideal VQE error {:.4} mHa (bound and monotonicity hold); \
         analog VQE error {:.2} mHa",
        ideal.error * 1e3,
        analog_run.error * 1e3
    );
    assert!(
        analog_run.error.abs() < 20e-3,
        "compiled-analog VQE error {:.1} mHa exceeds 20 mHa. Each Givens-SWAP \
         schedule stacks ~20 rotation pulses; at the synthesizable per-rotation \
         loss (≈ 1.1e-3, coherent) the per-gate fidelity is ~0.92-0.95 and the \
         reachable ansatz manifold no longer contains states within 20 mHa of the \
         sector ground energy (depth and restart sweeps reach ~430 mHa at best).",
        analog_run.error * 1e3
    );
    pass(
        9,
        &format!(
            "H2 ideal VQE error {:.4} mHa; analog VQE error {:.2} mHa; number symmetry and variational bound hold",
            ideal.error * 1e3,
            analog_run.error * 1e3
        ),
    );
}

#[test]
fn criterion_10_propagator_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);

    // Test-local series oracle, independent of the eigendecomposition path.
    fn expm_taylor(h: &CMat, t: f64) -> CMat {
        let n = h.nrows();
        let norm = linalg::fro_norm(h) * t.abs();
        let s = (norm / 0.5).log2().ceil().max(0.0) as u32;
        let scale = Complex64::new(0.0, -t / 2f64.powi(s as i32));
        let mut term = linalg::eye(n);
        let mut acc = linalg::eye(n);
        for k in 1..=20 {
            term = term.dot(h).mapv(|z| z * scale / Complex64::new(k as f64, 0.0));
            acc = acc + &term;
        }
        for _ in 0..s {
            acc = acc.dot(&acc);
        }
        acc
    }

    for case in 0..500 {
        let n = rng.gen_range(1..=6);
        let geometry = match rng.gen_range(0..3) {
            0 => Geometry::ChainObc,
            1 => Geometry::ChainPbc,
            _ => Geometry::Ring,
        };
        let interaction = if rng.gen_bool(0.5) {
            InteractionMode::NearestNeighbour
        } else {
            InteractionMode::FullTail
        };
        let spec =
            RegisterSpec::new(n.max(1), geometry, rng.gen_range(0.8..2.0), 1.0, interaction)
                .unwrap();
        let n = spec.n_qubits;
        let seg = PulseSegment::new(
            rng.gen_range(0.0..1.5),
            rng.gen_range(0.0..TAU),
            Delta::PerQubit((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()),
            rng.gen_range(0.05..1.0),
        )
        .unwrap();

        // Unitarity.
        let u = pulsegate::propagator::segment_unitary(&spec, &seg).unwrap();
        assert!(u.unitarity_defect() < 1e-9, "case {case}: unitarity");

        // Oracle equivalence.
        let h = hamiltonian(&spec, &seg).unwrap();
        let oracle = expm_taylor(&h, seg.duration);
        assert!(
            linalg::max_abs_diff(u.mat(), &oracle) < 1e-8,
            "case {case}: series oracle"
        );

        // Subdivision invariance.
        let k = rng.gen_range(2..4usize);
        let part = PulseSegment { duration: seg.duration / k as f64, ..seg.clone() };
        let split =
            PulseSequence::new(spec.clone(), vec![part; k]).unwrap();
        let u_split = sequence_unitary(&split).unwrap();
        assert!(
            linalg::max_abs_diff(u.mat(), u_split.mat()) < 1e-9,
            "case {case}: subdivision"
        );

        // Composition.
        let seg2 = PulseSegment::new(
            rng.gen_range(0.0..1.5),
            rng.gen_range(0.0..TAU),
            Delta::Uniform(rng.gen_range(-1.0..1.0)),
            rng.gen_range(0.05..1.0),
        )
        .unwrap();
        let u2 = pulsegate::propagator::segment_unitary(&spec, &seg2).unwrap();
        let seq = PulseSequence::new(spec.clone(), vec![seg.clone(), seg2]).unwrap();
        let u_seq = sequence_unitary(&seq).unwrap();
        let u_prod = u2.compose(&u).unwrap();
        assert!(
            linalg::max_abs_diff(u_seq.mat(), u_prod.mat()) < 1e-9,
            "case {case}: composition"
        );
    }
    pass(10, "unitarity, series-oracle, subdivision, composition on 500 random cases (N ≤ 6)");
}

// Keep a compile-time proof that the unused-looking imports above are real.
#[allow(dead_code)]
fn _type_anchors(u: &Unitary) -> usize {
    u.dim()
}
