// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Variational synthesis of global ±π/2 rotation pulses.
//!
//! The synthesizer minimizes the trace infidelity of a pulse sequence against
//! a target unitary with a box-constrained quasi-Newton solver, growing the
//! sequence by *pulse halving*: optimize a single segment of length `T`, split
//! every segment into two half-length copies (which leaves the unitary
//! unchanged), re-optimize, and repeat until segments reach the minimum
//! hardware length `dt`. Failed runs restart from fresh random parameters.
//!
//! Box constraints are the hardware-feasibility ones, `Ω < J` and `|δ| < 2J`,
//! enforced by clipping inside the solver — never by penalty.

mod lbfgsb;

pub use lbfgsb::{minimize as lbfgsb_minimize, Bounds, SolverConfig, SolverResult};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gates::{self, GateTarget, RotationKind};
use crate::metrics::{gate_fidelity, state_overlap, FidelityReport};
use crate::propagator::{sequence_unitary, SegmentPropagator, Unitary};
use crate::register::{Delta, PulseSegment, PulseSequence, RegisterSpec, TAU};
use crate::{Error, Result};

/// Margin keeping clipped parameters strictly inside the open constraint set.
const BOX_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Final stage has `2^p_max` segments.
    pub p_max: u32,
    /// Minimum segment duration in µs; total duration is `2^p_max · dt`.
    pub dt: f64,
    /// Loss target; the restart loop runs until the final-stage loss beats it.
    pub threshold: f64,
    pub max_restarts: usize,
    pub rng_seed: u64,
    /// Iteration cap per halving stage.
    pub max_iters: usize,
}

impl OptimizerConfig {
    pub fn new(p_max: u32, dt: f64, threshold: f64, max_restarts: usize, rng_seed: u64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidSegment("dt must be positive".into()));
        }
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::InvalidSegment("threshold must lie in (0, 1)".into()));
        }
        Ok(Self { p_max, dt, threshold, max_restarts, rng_seed, max_iters: 500 })
    }

    /// Defaults tuned for a 4-qubit chain: 8 segments of `dt = 1.6/J`.
    pub fn default_for(spec: &RegisterSpec) -> Self {
        let j = spec.nn_coupling();
        Self { p_max: 3, dt: 1.6 / j, threshold: 2e-3, max_restarts: 20, rng_seed: 1, max_iters: 500 }
    }

    pub fn total_duration(&self) -> f64 {
        (1u32 << self.p_max) as f64 * self.dt
    }
}

/// Per-restart record of the halving schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestartTrace {
    /// Loss at the start of each stage `p = 0..=p_max` (after the split).
    pub stage_initial_losses: Vec<f64>,
    /// Best loss reached at each stage.
    pub stage_losses: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub restarts: Vec<RestartTrace>,
    pub final_loss: f64,
    pub converged: bool,
    /// Wall time in seconds; informational only, never part of equality.
    pub wall_time_s: f64,
}

/// Scaled parameter layout: one `(Ω/J, Φ/2π, δ/2J)` triple per segment.
fn bounds_for(n_segments: usize) -> Bounds {
    let mut lower = Vec::with_capacity(3 * n_segments);
    let mut upper = Vec::with_capacity(3 * n_segments);
    for _ in 0..n_segments {
        lower.extend_from_slice(&[0.0, f64::NEG_INFINITY, -(1.0 - BOX_MARGIN)]);
        upper.extend_from_slice(&[1.0 - BOX_MARGIN, f64::INFINITY, 1.0 - BOX_MARGIN]);
    }
    Bounds { lower, upper }
}

fn params_to_sequence(
    params: &[f64],
    duration: f64,
    spec: &RegisterSpec,
) -> Result<PulseSequence> {
    let j = spec.nn_coupling();
    let segments = params
        .chunks_exact(3)
        .map(|c| {
            PulseSegment::new(
                c[0] * j,
                (c[1] * TAU).rem_euclid(TAU),
                Delta::Uniform(c[2] * 2.0 * j),
                duration,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    PulseSequence::new(spec.clone(), segments)
}

fn loss_of(params: &[f64], duration: f64, spec: &RegisterSpec, target: &Unitary) -> f64 {
    match params_to_sequence(params, duration, spec)
        .and_then(|seq| sequence_unitary(&seq))
        .and_then(|u| gate_fidelity(&u, target))
    {
        Ok(rep) => rep.loss,
        Err(_) => 1.0,
    }
}

/// One full halving schedule from a fresh random initialization.
fn run_restart(
    target: &Unitary,
    spec: &RegisterSpec,
    cfg: &OptimizerConfig,
    restart: usize,
) -> (Vec<f64>, RestartTrace, f64) {
    let total = cfg.total_duration();
    let solver = SolverConfig { max_iters: cfg.max_iters, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(restart as u64));
    let mut params: Vec<f64> = vec![
        rng.gen_range(0.0..1.0 - BOX_MARGIN),
        rng.gen_range(0.0..1.0),
        rng.gen_range(-(1.0 - BOX_MARGIN)..1.0 - BOX_MARGIN),
    ];
    let mut trace = RestartTrace { stage_initial_losses: Vec::new(), stage_losses: Vec::new() };
    let mut stage_loss = f64::INFINITY;
    let mut pending_initial: Option<f64> = None;

    for p in 0..=cfg.p_max {
        let n_segments = 1usize << p;
        let duration = total / n_segments as f64;
        let bounds = bounds_for(n_segments);
        // The initial loss of stages after a split is measured at the exact
        // split point (before the symmetry-breaking jitter below), which is
        // what the halving-monotonicity invariant is about.
        let initial = pending_initial
            .take()
            .unwrap_or_else(|| loss_of(&params, duration, spec, target));
        trace.stage_initial_losses.push(initial);
        let mut f = |x: &[f64]| loss_of(x, duration, spec, target);
        let res = lbfgsb::minimize(&mut f, &params, &bounds, &solver);
        params = res.x;
        stage_loss = res.loss;
        trace.stage_losses.push(stage_loss);
        if p < cfg.p_max {
            // Pulse halving: each segment becomes two half-length copies,
            // which keeps the unitary (and hence the loss) unchanged. A
            // tiny jitter then breaks the symmetry of the duplicated point —
            // the split of a converged optimum is itself stationary, and a
            // finite-difference gradient cannot leave it otherwise. The
            // loss cost of the jitter is second order at converged stages.
            let mut doubled = Vec::with_capacity(params.len() * 2);
            for c in params.chunks_exact(3) {
                doubled.extend_from_slice(c);
                doubled.extend_from_slice(c);
            }
            pending_initial =
                Some(loss_of(&doubled, duration / 2.0, spec, target));
            for v in doubled.iter_mut() {
                *v += rng.gen_range(-1e-6..1e-6);
            }
            bounds_for(2 * n_segments).project(&mut doubled);
            params = doubled;
        }
    }
    (params, trace, stage_loss)
}

/// Synthesize a pulse sequence approximating `target` on `spec`.
///
/// Returns the first sequence whose final-stage loss beats the threshold,
/// or [`Error::OptimizerExhausted`] carrying the best attempt.
pub fn optimize_global_rotation(
    target: &Unitary,
    spec: &RegisterSpec,
    cfg: &OptimizerConfig,
) -> Result<(PulseSequence, OptimizationTrace)> {
    optimize_global_rotation_jobs(target, spec, cfg, 1)
}

/// Restart loop with a worker pool.
///
/// Restarts run in waves of `jobs`; within a wave the lowest restart index
/// that beats the threshold wins, so the result is identical for every
/// `jobs` value — only wall time changes.
pub fn optimize_global_rotation_jobs(
    target: &Unitary,
    spec: &RegisterSpec,
    cfg: &OptimizerConfig,
    jobs: usize,
) -> Result<(PulseSequence, OptimizationTrace)> {
    if target.dim() != spec.dim() {
        return Err(Error::DimensionMismatch(format!(
            "target dim {} vs register dim {}",
            target.dim(),
            spec.dim()
        )));
    }
    let start = std::time::Instant::now();
    let jobs = jobs.max(1);
    let max_restarts = cfg.max_restarts.max(1);

    let mut restarts: Vec<RestartTrace> = Vec::new();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut winner: Option<(f64, Vec<f64>)> = None;

    let mut next = 0usize;
    while next < max_restarts && winner.is_none() {
        let wave: Vec<usize> = (next..max_restarts.min(next + jobs)).collect();
        next += wave.len();
        let mut results: Vec<(Vec<f64>, RestartTrace, f64)> =
            Vec::with_capacity(wave.len());
        if wave.len() == 1 {
            results.push(run_restart(target, spec, cfg, wave[0]));
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = wave
                    .iter()
                    .map(|&r| scope.spawn(move || run_restart(target, spec, cfg, r)))
                    .collect();
                for h in handles {
                    results.push(h.join().expect("restart worker panicked"));
                }
            });
        }
        for (params, trace, loss) in results {
            let already_won = winner.is_some();
            restarts.push(trace);
            if best.as_ref().map_or(true, |(l, _)| loss < *l) {
                best = Some((loss, params.clone()));
            }
            if !already_won && loss <= cfg.threshold {
                winner = Some((loss, params));
            }
        }
    }

    let wall_time_s = start.elapsed().as_secs_f64();
    if let Some((loss, params)) = winner {
        let seq = params_to_sequence(&params, cfg.dt, spec)?;
        let trace = OptimizationTrace { restarts, final_loss: loss, converged: true, wall_time_s };
        return Ok((seq, trace));
    }

    let (best_loss, best_params) = best.expect("at least one restart ran");
    let seq = params_to_sequence(&best_params, cfg.dt, spec)?;
    let trace =
        OptimizationTrace { restarts, final_loss: best_loss, converged: false, wall_time_s };
    Err(Error::OptimizerExhausted {
        restarts: max_restarts,
        best_loss,
        best: Box::new((seq, trace)),
    })
}

/// Split every segment into two half-duration copies; the sequence unitary
/// is unchanged.
pub fn split_sequence(seq: &PulseSequence) -> Result<PulseSequence> {
    let d0 = seq.segments[0].duration;
    if seq.segments.iter().any(|s| (s.duration - d0).abs() > 1e-12 * d0.max(1.0)) {
        return Err(Error::InvalidSegment(
            "split requires uniform segment durations".into(),
        ));
    }
    let mut segments = Vec::with_capacity(seq.segments.len() * 2);
    for seg in &seq.segments {
        let half = PulseSegment { duration: seg.duration / 2.0, ..seg.clone() };
        segments.push(half.clone());
        segments.push(half);
    }
    PulseSequence::new(seq.register.clone(), segments)
}

/// Turn one optimized global rotation into another by a constant phase shift
/// of every segment.
///
/// The candidate shift for the axis/sign change is resolved numerically:
/// both signs of the quarter-turn are evaluated against the target and the
/// better one wins, because the drive convention `cos Φ σx − sin Φ σy` fixes
/// the sign in a way that is easy to get wrong by hand.
pub fn derive_rotation_family(
    base: &PulseSequence,
    from: RotationKind,
    to: RotationKind,
) -> Result<PulseSequence> {
    let n = base.register.n_qubits;
    let target = gates::global_rotation(n, to)?;
    let candidates: &[f64] = if from == to {
        &[0.0]
    } else if from.axis() == to.axis() {
        // Opposite sign about the same axis: a half-turn of the drive phase.
        &[std::f64::consts::PI]
    } else {
        &[std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2]
    };

    let mut best: Option<(f64, PulseSequence)> = None;
    for &shift in candidates {
        let segments = base
            .segments
            .iter()
            .map(|s| PulseSegment { phi: (s.phi + shift).rem_euclid(TAU), ..s.clone() })
            .collect();
        let seq = PulseSequence::new(base.register.clone(), segments)?;
        let fid = gate_fidelity(&sequence_unitary(&seq)?, &target)?.fidelity;
        if best.as_ref().map_or(true, |(f, _)| fid > *f) {
            best = Some((fid, seq));
        }
    }
    let (fid, seq) = best.expect("candidate list is never empty");
    if fid < 0.99 {
        return Err(Error::InvalidRotationLibrary(format!(
            "phase-shifted sequence only reaches fidelity {fid:.4} against {to}"
        )));
    }
    Ok(seq)
}

/// One point of a duration scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanPoint {
    pub scale: f64,
    pub duration_us: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub points: Vec<ScanPoint>,
    pub best: ScanPoint,
}

/// Which metric a duration scan evaluates.
#[derive(Debug, Clone)]
pub enum ScanMetric {
    Trace(GateTarget),
    Overlap(GateTarget),
}

/// Uniformly rescale all segment durations over a grid of scale factors and
/// evaluate the metric at each, reporting the argmax.
///
/// Trace scans reuse one eigendecomposition per segment across the whole
/// grid, since rescaling durations does not change the Hamiltonians.
pub fn refine_duration(
    seq: &PulseSequence,
    metric: &ScanMetric,
    scale_range: (f64, f64),
    n_points: usize,
) -> Result<ScanReport> {
    let (lo, hi) = scale_range;
    if n_points == 0 || !(lo > 0.0) || !(hi >= lo) || hi > 2.0 {
        return Err(Error::EmptyScanRange);
    }
    let total = seq.total_duration();
    let scales: Vec<f64> = if n_points == 1 {
        vec![lo]
    } else {
        (0..n_points)
            .map(|k| lo + (hi - lo) * k as f64 / (n_points - 1) as f64)
            .collect()
    };

    let mut points = Vec::with_capacity(n_points);
    match metric {
        ScanMetric::Trace(target) => {
            let g = target.unitary(seq.register.n_qubits)?;
            let props: Vec<(SegmentPropagator, f64)> = seq
                .segments
                .iter()
                .map(|s| SegmentPropagator::prepare(&seq.register, s).map(|p| (p, s.duration)))
                .collect::<Result<Vec<_>>>()?;
            for &scale in &scales {
                let mut u = Unitary::identity(seq.register.n_qubits);
                for (prop, dur) in &props {
                    u = prop.unitary(dur * scale).compose(&u)?;
                }
                let rep = gate_fidelity(&u, &g)?;
                points.push(ScanPoint {
                    scale,
                    duration_us: total * scale,
                    fidelity: rep.fidelity,
                });
            }
        }
        ScanMetric::Overlap(target) => {
            for &scale in &scales {
                let rep: FidelityReport = state_overlap(&seq.rescaled(scale)?, target)?;
                points.push(ScanPoint {
                    scale,
                    duration_us: total * scale,
                    fidelity: rep.fidelity,
                });
            }
        }
    }

    let best = *points
        .iter()
        .max_by(|a, b| a.fidelity.partial_cmp(&b.fidelity).unwrap())
        .expect("scan has at least one point");
    Ok(ScanReport { points, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::RotationKind;
    use crate::linalg::max_abs_diff;
    use crate::register::{Geometry, InteractionMode};

    fn chain(n: usize, geometry: Geometry) -> RegisterSpec {
        RegisterSpec::new(n, geometry, 1.0, 1.0, InteractionMode::NearestNeighbour).unwrap()
    }

    #[test]
    fn identity_target_converges_immediately() {
        let spec = chain(2, Geometry::ChainObc);
        // dt = 2π/J: the zero-field point is an exact fixed point since the
        // interaction phase winds a full turn.
        let cfg = OptimizerConfig::new(0, TAU, 2e-3, 5, 3).unwrap();
        let target = Unitary::identity(2);
        let (seq, trace) = optimize_global_rotation(&target, &spec, &cfg).unwrap();
        assert!(trace.final_loss <= 2e-3);
        assert_eq!(seq.segments.len(), 1);
        assert!(seq.segments.iter().all(|s| s.is_global_constrained(&spec)));
    }

    #[test]
    fn split_preserves_unitary() {
        let spec = chain(2, Geometry::ChainPbc);
        let seq = PulseSequence::new(
            spec,
            vec![
                PulseSegment::uniform(0.4, 0.3, -0.2, 0.8).unwrap(),
                PulseSegment::uniform(0.7, 2.0, 0.5, 0.8).unwrap(),
            ],
        )
        .unwrap();
        let split = split_sequence(&seq).unwrap();
        assert_eq!(split.segments.len(), 4);
        let u1 = sequence_unitary(&seq).unwrap();
        let u2 = sequence_unitary(&split).unwrap();
        assert!(max_abs_diff(u1.mat(), u2.mat()) < 1e-10);
    }

    #[test]
    fn split_rejects_nonuniform_durations() {
        let spec = chain(2, Geometry::ChainObc);
        let seq = PulseSequence::new(
            spec,
            vec![
                PulseSegment::uniform(0.4, 0.3, -0.2, 0.8).unwrap(),
                PulseSegment::uniform(0.7, 2.0, 0.5, 0.9).unwrap(),
            ],
        )
        .unwrap();
        assert!(split_sequence(&seq).is_err());
    }

    #[test]
    fn determinism_same_seed_same_result() {
        let spec = chain(2, Geometry::ChainPbc);
        let target = gates::global_rotation(2, RotationKind::RxPlus).unwrap();
        // Convergence is irrelevant here; both outcomes carry a sequence
        // and a trace, and they must be bit-identical run to run.
        let cfg = OptimizerConfig::new(2, 1.2, 5e-2, 3, 42).unwrap();
        let run = || match optimize_global_rotation(&target, &spec, &cfg) {
            Ok((seq, trace)) => (seq, trace),
            Err(Error::OptimizerExhausted { best, .. }) => *best,
            Err(e) => panic!("unexpected error {e}"),
        };
        let (seq_a, trace_a) = run();
        let (seq_b, trace_b) = run();
        assert_eq!(seq_a, seq_b);
        assert_eq!(trace_a.final_loss, trace_b.final_loss);
        assert_eq!(trace_a.restarts.len(), trace_b.restarts.len());
        for (a, b) in trace_a.restarts.iter().zip(trace_b.restarts.iter()) {
            assert_eq!(a.stage_losses, b.stage_losses);
            assert_eq!(a.stage_initial_losses, b.stage_initial_losses);
        }
        // Halving monotonicity: each stage starts from the split (plus a
        // second-order jitter) of the previous optimum, so its initial loss
        // can exceed the previous final loss only negligibly.
        for trace in &trace_a.restarts {
            for p in 1..trace.stage_initial_losses.len() {
                assert!(
                    trace.stage_initial_losses[p] <= trace.stage_losses[p - 1] + 1e-9,
                    "stage {p} starts at {} after a stage ending at {}",
                    trace.stage_initial_losses[p],
                    trace.stage_losses[p - 1]
                );
            }
        }
    }

    #[test]
    fn phase_shift_conjugates_by_z_rotation() {
        // Shifting every segment phase by φ₀ conjugates the sequence unitary
        // by exp(+i φ₀ Σσz/2); the detuning and interaction terms are
        // diagonal and unaffected, so this is exact.
        use num_complex::Complex64;
        let spec = chain(3, Geometry::ChainPbc);
        let seq = PulseSequence::new(
            spec.clone(),
            vec![
                PulseSegment::uniform(0.7, 0.4, -0.5, 0.9).unwrap(),
                PulseSegment::uniform(0.3, 2.8, 0.8, 1.1).unwrap(),
            ],
        )
        .unwrap();
        let phi0 = 1.234;
        let shifted = PulseSequence::new(
            spec.clone(),
            seq.segments
                .iter()
                .map(|s| PulseSegment { phi: s.phi + phi0, ..s.clone() })
                .collect(),
        )
        .unwrap();
        let u = sequence_unitary(&seq).unwrap();
        let u_shift = sequence_unitary(&shifted).unwrap();
        // V = exp(+i φ₀ Σσz/2) is diagonal with phases from the z-sum.
        let dim = spec.dim();
        let mut v = crate::linalg::eye(dim);
        for b in 0..dim {
            let ones = (b as u32).count_ones() as f64;
            let zsum = spec.n_qubits as f64 - 2.0 * ones;
            v[(b, b)] = Complex64::from_polar(1.0, phi0 * zsum / 2.0);
        }
        let conj = v.dot(u.mat()).dot(&crate::linalg::dagger(&v));
        assert!(crate::linalg::max_abs_diff(u_shift.mat(), &conj) < 1e-12);
    }

    #[test]
    fn zero_shift_returns_identical_sequence() {
        let spec = chain(2, Geometry::ChainObc);
        let seq = PulseSequence::new(
            spec,
            vec![PulseSegment::uniform(0.9, 0.1, 0.0, std::f64::consts::FRAC_PI_2 / 0.9).unwrap()],
        )
        .unwrap();
        // This single segment is close to RX(π/2) for a weakly coupled pair;
        // with from == to the derived sequence must be byte-identical.
        let got = derive_rotation_family(&seq, RotationKind::RxPlus, RotationKind::RxPlus);
        match got {
            Ok(derived) => assert_eq!(derived, seq),
            Err(Error::InvalidRotationLibrary(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn scan_scale_one_reproduces_unscaled_metric() {
        let spec = chain(2, Geometry::ChainObc);
        let seq = PulseSequence::new(
            spec,
            vec![PulseSegment::uniform(0.5, 0.2, 0.1, 1.0).unwrap()],
        )
        .unwrap();
        let target = GateTarget::Identity;
        let direct = gate_fidelity(
            &sequence_unitary(&seq).unwrap(),
            &target.unitary(2).unwrap(),
        )
        .unwrap()
        .fidelity;
        let report =
            refine_duration(&seq, &ScanMetric::Trace(target), (1.0, 1.0), 1).unwrap();
        assert!((report.points[0].fidelity - direct).abs() < 1e-12);
    }

    #[test]
    fn scan_rejects_empty_range() {
        let spec = chain(2, Geometry::ChainObc);
        let seq = PulseSequence::new(
            spec,
            vec![PulseSegment::uniform(0.5, 0.2, 0.1, 1.0).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            refine_duration(&seq, &ScanMetric::Trace(GateTarget::Identity), (1.0, 1.0), 0),
            Err(Error::EmptyScanRange)
        ));
        assert!(matches!(
            refine_duration(&seq, &ScanMetric::Trace(GateTarget::Identity), (0.5, 2.5), 3),
            Err(Error::EmptyScanRange)
        ));
    }
}
