// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Randomized invariant checks across modules.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pulsegate::gates;
use pulsegate::linalg::{self, CMat};
use pulsegate::metrics::{gate_fidelity, magnetization_profile, state_overlap};
use pulsegate::propagator::{evolve_state, sequence_unitary, StateVector, Unitary};
use pulsegate::register::{
    hamiltonian, Delta, Geometry, InteractionMode, PulseSegment, PulseSequence, RegisterSpec,
    TAU,
};
use pulsegate::schedule::ScheduleFile;

fn random_register(rng: &mut impl Rng) -> RegisterSpec {
    let n = rng.gen_range(2..=5);
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
    RegisterSpec::new(n, geometry, rng.gen_range(0.5..3.0), rng.gen_range(0.5..5.0), interaction)
        .unwrap()
}

fn random_segment(n: usize, rng: &mut impl Rng) -> PulseSegment {
    let delta = if rng.gen_bool(0.5) {
        Delta::Uniform(rng.gen_range(-2.0..2.0))
    } else {
        Delta::PerQubit((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
    };
    PulseSegment::new(
        rng.gen_range(0.0..1.5),
        rng.gen_range(0.0..TAU),
        delta,
        rng.gen_range(0.05..1.5),
    )
    .unwrap()
}

fn random_unitary(n_qubits: usize, rng: &mut impl Rng) -> Unitary {
    let dim = 1usize << n_qubits;
    let mut h: CMat = Array2::zeros((dim, dim));
    for i in 0..dim {
        h[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    Unitary::new(linalg::hermitian_func(&h, |e| Complex64::from_polar(1.0, -e))).unwrap()
}

#[test]
fn hamiltonians_are_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..60 {
        let spec = random_register(&mut rng);
        let seg = random_segment(spec.n_qubits, &mut rng);
        let h = hamiltonian(&spec, &seg).unwrap();
        assert!(linalg::hermiticity_defect(&h) < 1e-12);
    }
}

#[test]
fn sequence_composition_matches_concatenation() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..30 {
        let spec = random_register(&mut rng);
        let n = spec.n_qubits;
        let s1: Vec<_> = (0..rng.gen_range(1..3)).map(|_| random_segment(n, &mut rng)).collect();
        let s2: Vec<_> = (0..rng.gen_range(1..3)).map(|_| random_segment(n, &mut rng)).collect();
        let mut cat = s1.clone();
        cat.extend(s2.clone());
        let u_cat =
            sequence_unitary(&PulseSequence::new(spec.clone(), cat).unwrap()).unwrap();
        let u1 = sequence_unitary(&PulseSequence::new(spec.clone(), s1).unwrap()).unwrap();
        let u2 = sequence_unitary(&PulseSequence::new(spec, s2).unwrap()).unwrap();
        let u_prod = u2.compose(&u1).unwrap();
        assert!(linalg::max_abs_diff(u_cat.mat(), u_prod.mat()) < 1e-9);
    }
}

#[test]
fn state_evolution_preserves_norm_and_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..20 {
        let spec = random_register(&mut rng);
        let n = spec.n_qubits;
        let segs: Vec<_> = (0..rng.gen_range(1..4)).map(|_| random_segment(n, &mut rng)).collect();
        let seq = PulseSequence::new(spec, segs).unwrap();
        let psi0 = StateVector::basis_state(n, rng.gen_range(0..1 << n));
        let psi = evolve_state(&seq, &psi0).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-8);
        let dense = sequence_unitary(&seq).unwrap().apply(&psi0).unwrap();
        let overlap = dense.inner(&psi).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-8, "overlap {overlap}");
    }
}

#[test]
fn fidelity_invariances() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..25 {
        let n = rng.gen_range(1..=3);
        let u = random_unitary(n, &mut rng);
        let g = random_unitary(n, &mut rng);
        let v = random_unitary(n, &mut rng);
        let f0 = gate_fidelity(&u, &g).unwrap().fidelity;
        // Global phase on either argument.
        let phi = rng.gen_range(0.0..TAU);
        let up = Unitary::new(u.mat().mapv(|z| z * Complex64::from_polar(1.0, phi))).unwrap();
        assert!((gate_fidelity(&up, &g).unwrap().fidelity - f0).abs() < 1e-12);
        // Simultaneous left-multiplication.
        let f1 = gate_fidelity(&v.compose(&u).unwrap(), &v.compose(&g).unwrap())
            .unwrap()
            .fidelity;
        assert!((f1 - f0).abs() < 1e-10);
        // Range.
        assert!((0.0..=1.0 + 1e-12).contains(&f0));
    }
}

#[test]
fn magnetizations_stay_in_range_and_sum_consistently() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..20 {
        let spec = random_register(&mut rng);
        let n = spec.n_qubits;
        let seq = PulseSequence::new(spec, vec![random_segment(n, &mut rng)]).unwrap();
        let psi = evolve_state(&seq, &StateVector::zero_state(n)).unwrap();
        let mags = magnetization_profile(&psi);
        assert_eq!(mags.len(), n);
        for m in &mags {
            assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(m));
        }
    }
}

#[test]
fn exact_rz_sequence_has_unit_overlap_and_unit_trace_fidelity() {
    // When a sequence exactly implements its target both metrics agree at 1.
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..10 {
        let n = rng.gen_range(2..=5);
        let spec = RegisterSpec::new(
            n,
            Geometry::ChainObc,
            1.0,
            1.0,
            InteractionMode::NearestNeighbour,
        )
        .unwrap();
        let t = TAU / spec.nn_coupling();
        let thetas: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let deltas: Vec<f64> = thetas.iter().map(|&th| -th / t).collect();
        let seq = PulseSequence::new(
            spec,
            vec![PulseSegment::new(0.0, 0.0, Delta::PerQubit(deltas), t).unwrap()],
        )
        .unwrap();
        let target = gates::GateTarget::RzLayer(thetas.clone());
        let overlap = state_overlap(&seq, &target).unwrap().fidelity;
        let trace = gate_fidelity(
            &sequence_unitary(&seq).unwrap(),
            &target.unitary(n).unwrap(),
        )
        .unwrap()
        .fidelity;
        assert!((overlap - 1.0).abs() < 1e-9);
        assert!((trace - 1.0).abs() < 1e-9);
    }
}

#[test]
fn schedule_files_round_trip_canonically() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..15 {
        let spec = random_register(&mut rng);
        let n = spec.n_qubits;
        let segs: Vec<_> = (0..rng.gen_range(1..5)).map(|_| random_segment(n, &mut rng)).collect();
        let k = segs.len();
        let seq = PulseSequence::new(spec, segs).unwrap();
        let tags: Vec<String> = (0..k).map(|i| format!("t{i}")).collect();
        let text = ScheduleFile::from_sequence(&seq, &tags).emit();
        let parsed = ScheduleFile::parse(&text).unwrap();
        assert_eq!(parsed.emit(), text, "emit→parse→emit must be byte-identical");
        let (back, back_tags) = parsed.to_sequence().unwrap();
        assert_eq!(back_tags, tags);
        assert_eq!(back.segments.len(), seq.segments.len());
        // Numeric round trip within float-print precision.
        for (a, b) in back.segments.iter().zip(seq.segments.iter()) {
            assert!((a.omega - b.omega).abs() < 1e-9);
            assert!((a.duration - b.duration).abs() < 1e-12);
        }
    }
}
