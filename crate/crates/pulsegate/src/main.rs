// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! `pulsegate` — synthesize, compile, simulate, scan, and run VQE.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 best-effort
//! optimization (threshold not met), 3 unrealizable compilation,
//! 4 invalid fixture.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ndarray::Array2;
use num_complex::Complex64;

use pulsegate::gatelib::{compile_circuit, CircuitIR, CompiledSchedule, RotationLibrary};
use pulsegate::gates::{GateTarget, RotationKind};
use pulsegate::metrics::{gate_fidelity, magnetization_profile, state_overlap};
use pulsegate::propagator::{evolve_state, sequence_unitary, StateVector, Unitary};
use pulsegate::pulseopt::{
    optimize_global_rotation_jobs, refine_duration, OptimizerConfig, ScanMetric,
};
use pulsegate::register::{PulseSequence, RegisterSpec};
use pulsegate::schedule::ScheduleFile;
use pulsegate::vqe::{run_vqe, AnsatzSpec, Backend, PairedHamiltonian, VqeConfig};
use pulsegate::Error;

/// Environment variable holding a default register path.
const REGISTER_ENV: &str = "PULSEGATE_REGISTER";

#[derive(Parser)]
#[command(name = "pulsegate", version, about = "Analog pulse synthesis and gate compilation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Variationally synthesize a global rotation pulse sequence.
    Optimize(OptimizeArgs),
    /// Compile a gate circuit to a pulse schedule.
    Compile(CompileArgs),
    /// Evaluate a schedule against a metric.
    Simulate(SimulateArgs),
    /// Scan a schedule's duration scale and report fidelities.
    Scan(ScanArgs),
    /// Run a paired-electron VQE from a fixture.
    Vqe(VqeArgs),
}

#[derive(Args)]
struct RegisterArg {
    /// Register JSON (defaults to $PULSEGATE_REGISTER).
    #[arg(long)]
    register: Option<PathBuf>,
}

impl RegisterArg {
    fn load(&self) -> Result<RegisterSpec, CliError> {
        let path = match &self.register {
            Some(p) => p.clone(),
            None => std::env::var_os(REGISTER_ENV)
                .map(PathBuf::from)
                .ok_or_else(|| CliError::usage("no --register and PULSEGATE_REGISTER unset"))?,
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::usage(&format!("cannot read {}: {e}", path.display())))?;
        RegisterSpec::from_json(&text).map_err(CliError::from_input)
    }
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    register: RegisterArg,
    /// Target rotation: rx+, rx-, ry+, ry-, or identity.
    #[arg(long, default_value = "rx+")]
    target: String,
    /// Halving depth; the final sequence has 2^pmax segments.
    #[arg(long, default_value_t = 3)]
    pmax: u32,
    /// Minimum segment duration in µs (default 1.6/J).
    #[arg(long)]
    dt: Option<f64>,
    /// Loss threshold the restart loop must beat.
    #[arg(long, default_value_t = 2e-3)]
    threshold: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Parallel restart workers.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output schedule path.
    #[arg(long)]
    out: PathBuf,
    /// Optional optimization trace (JSON).
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    register: RegisterArg,
    /// Circuit text file (one layer per line).
    #[arg(long)]
    circuit: PathBuf,
    /// Optimized base rotation schedule (JSON) to build the library from.
    #[arg(long, conflicts_with = "ideal_rotations")]
    rotations: Option<PathBuf>,
    /// Which rotation the --rotations schedule implements.
    #[arg(long, default_value = "rx+")]
    rotations_kind: String,
    /// Use exact rotation matrices instead of pulses (verification mode).
    #[arg(long)]
    ideal_rotations: bool,
    /// Output schedule path (requires pulse rotations).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Schedule JSON.
    #[arg(long)]
    schedule: PathBuf,
    /// Metric: trace:<target>, overlap:<target>, or magnetization.
    /// Targets: rx+, rx-, ry+, ry-, identity, x:<k>, or @matrix.json.
    #[arg(long)]
    metric: String,
    /// Output report path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    schedule: PathBuf,
    /// Metric: trace:<target> or overlap:<target>.
    #[arg(long)]
    metric: String,
    #[arg(long, default_value_t = 0.8)]
    scale_from: f64,
    #[arg(long, default_value_t = 1.2)]
    scale_to: f64,
    #[arg(long, default_value_t = 21)]
    points: usize,
    /// Output CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VqeArgs {
    /// Fixture JSON with the paired-electron Hamiltonian.
    #[arg(long)]
    fixture: PathBuf,
    /// ideal or analog.
    #[arg(long, default_value = "ideal")]
    backend: String,
    /// Brick layers in the ansatz.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 300)]
    max_iters: usize,
    /// Register JSON for the analog backend.
    #[command(flatten)]
    register: RegisterArg,
    /// Rotation schedule for the analog backend (ideal rotations if omitted).
    #[arg(long)]
    rotations: Option<PathBuf>,
    /// Energy trace CSV path.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Summary JSON path (stdout if omitted).
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

/// Exit-code-carrying error.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(msg: &str) -> Self {
        Self { code: 1, message: msg.to_string() }
    }

    fn from_input(e: Error) -> Self {
        let code = match &e {
            Error::UnrealizableLayer { .. } => 3,
            Error::InvalidFixture(_) => 4,
            Error::OptimizerExhausted { .. } => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Optimize(args) => cmd_optimize(args),
        Command::Compile(args) => cmd_compile(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Vqe(args) => cmd_vqe(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::usage(&format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_schedule(path: &Path) -> Result<(PulseSequence, Vec<String>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(&format!("cannot read {}: {e}", path.display())))?;
    let file = ScheduleFile::parse(&text).map_err(CliError::from_input)?;
    file.to_sequence().map_err(CliError::from_input)
}

fn parse_target(name: &str, n_qubits: usize) -> Result<GateTarget, CliError> {
    if let Some(path) = name.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(&format!("cannot read {path}: {e}")))?;
        let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(&format!("bad matrix JSON: {e}")))?;
        let dim = rows.len();
        if dim != 1usize << n_qubits || rows.iter().any(|r| r.len() != dim) {
            return Err(CliError::usage("matrix dimension mismatch"));
        }
        let mut mat = Array2::zeros((dim, dim));
        for (i, row) in rows.iter().enumerate() {
            for (j, &[re, im]) in row.iter().enumerate() {
                mat[(i, j)] = Complex64::new(re, im);
            }
        }
        let u = Unitary::new(mat).map_err(CliError::from_input)?;
        return Ok(GateTarget::Matrix(u));
    }
    GateTarget::parse(name).map_err(CliError::from_input)
}

fn parse_rotation_kind(name: &str) -> Result<RotationKind, CliError> {
    match name.to_ascii_lowercase().as_str() {
        "rx+" => Ok(RotationKind::RxPlus),
        "rx-" => Ok(RotationKind::RxMinus),
        "ry+" => Ok(RotationKind::RyPlus),
        "ry-" => Ok(RotationKind::RyMinus),
        _ => Err(CliError::usage("rotation must be one of rx+, rx-, ry+, ry-")),
    }
}

fn load_rotation_library(
    path: &Path,
    kind_name: &str,
) -> Result<RotationLibrary, CliError> {
    let (base, _) = load_schedule(path)?;
    let kind = parse_rotation_kind(kind_name)?;
    let lib = RotationLibrary::from_base(&base, kind).map_err(CliError::from_input)?;
    lib.validate(0.999).map_err(CliError::from_input)?;
    Ok(lib)
}

fn cmd_optimize(args: OptimizeArgs) -> Result<ExitCode, CliError> {
    let spec = args.register.load()?;
    let dt = args.dt.unwrap_or(1.6 / spec.nn_coupling());
    let cfg = OptimizerConfig::new(args.pmax, dt, args.threshold, args.restarts, args.seed)
        .map_err(CliError::from_input)?;
    let target = parse_target(&args.target, spec.n_qubits)?;
    let target_u = target.unitary(spec.n_qubits).map_err(CliError::from_input)?;

    let (seq, trace, best_effort) =
        match optimize_global_rotation_jobs(&target_u, &spec, &cfg, args.jobs.max(1)) {
            Ok((seq, trace)) => (seq, trace, false),
            Err(Error::OptimizerExhausted { best, .. }) => {
                let (seq, trace) = *best;
                (seq, trace, true)
            }
            Err(e) => return Err(CliError::from_input(e)),
        };

    let tags = vec![format!("opt:{}", args.target); seq.segments.len()];
    let file = ScheduleFile::from_sequence(&seq, &tags);
    std::fs::write(&args.out, file.emit())
        .map_err(|e| CliError::usage(&format!("cannot write {}: {e}", args.out.display())))?;
    if let Some(trace_path) = &args.trace {
        let text = serde_json::to_string_pretty(&trace)
            .map_err(|e| CliError::usage(&format!("trace serialization: {e}")))?;
        std::fs::write(trace_path, text)
            .map_err(|e| CliError::usage(&format!("cannot write trace: {e}")))?;
    }
    let fidelity = 1.0 - trace.final_loss;
    eprintln!(
        "{} loss {:.3e} (fidelity {:.5}) after {} restart(s)",
        if best_effort { "best-effort" } else { "converged:" },
        trace.final_loss,
        fidelity,
        trace.restarts.len(),
    );
    Ok(if best_effort { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn cmd_compile(args: CompileArgs) -> Result<ExitCode, CliError> {
    let spec = args.register.load()?;
    let text = std::fs::read_to_string(&args.circuit)
        .map_err(|e| CliError::usage(&format!("cannot read circuit: {e}")))?;
    let ir = CircuitIR::parse(&text).map_err(CliError::from_input)?;

    let lib = if args.ideal_rotations {
        RotationLibrary::Ideal
    } else {
        match &args.rotations {
            Some(path) => load_rotation_library(path, &args.rotations_kind)?,
            None => return Err(CliError::usage("need --rotations <schedule> or --ideal-rotations")),
        }
    };

    let sched = compile_circuit(&ir, &spec, &lib).map_err(CliError::from_input)?;
    print_ledger(&sched);
    if sched.approximate {
        eprintln!("note: full-tail register; Rz-based constructions are approximate");
    }

    if let Some(out) = &args.out {
        let file = ScheduleFile::from_compiled(&sched).map_err(CliError::from_input)?;
        std::fs::write(out, file.emit())
            .map_err(|e| CliError::usage(&format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_ledger(sched: &CompiledSchedule) {
    println!("{:<28} {:>12}", "gate", "duration_us");
    for entry in &sched.ledger {
        println!("{:<28} {:>12.4}", entry.gate, entry.duration_us);
    }
    println!("{:<28} {:>12.4}", "total", sched.total_duration());
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    let (seq, _) = load_schedule(&args.schedule)?;
    let n = seq.register.n_qubits;
    let report = if args.metric == "magnetization" {
        let psi = evolve_state(&seq, &StateVector::zero_state(n))
            .map_err(CliError::from_input)?;
        serde_json::json!({
            "metric": "magnetization",
            "n_qubits": n,
            "duration_us": seq.total_duration(),
            "magnetization": magnetization_profile(&psi),
        })
    } else if let Some(rest) = args.metric.strip_prefix("trace:") {
        let target = parse_target(rest, n)?;
        let u = sequence_unitary(&seq).map_err(CliError::from_input)?;
        let g = target.unitary(n).map_err(CliError::from_input)?;
        let rep = gate_fidelity(&u, &g).map_err(CliError::from_input)?;
        serde_json::json!({
            "metric": "trace",
            "target": rest,
            "n_qubits": n,
            "duration_us": seq.total_duration(),
            "fidelity": rep.fidelity,
            "loss": rep.loss,
        })
    } else if let Some(rest) = args.metric.strip_prefix("overlap:") {
        let target = parse_target(rest, n)?;
        let rep = state_overlap(&seq, &target).map_err(CliError::from_input)?;
        serde_json::json!({
            "metric": "overlap",
            "target": rest,
            "n_qubits": n,
            "duration_us": seq.total_duration(),
            "fidelity": rep.fidelity,
            "loss": rep.loss,
        })
    } else {
        return Err(CliError::usage(
            "metric must be trace:<target>, overlap:<target>, or magnetization",
        ));
    };
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::usage(&format!("report serialization: {e}")))?;
    text.push('\n');
    write_or_print(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode, CliError> {
    let (seq, _) = load_schedule(&args.schedule)?;
    let n = seq.register.n_qubits;
    let metric = if let Some(rest) = args.metric.strip_prefix("trace:") {
        ScanMetric::Trace(parse_target(rest, n)?)
    } else if let Some(rest) = args.metric.strip_prefix("overlap:") {
        ScanMetric::Overlap(parse_target(rest, n)?)
    } else {
        return Err(CliError::usage("metric must be trace:<target> or overlap:<target>"));
    };
    let report = refine_duration(&seq, &metric, (args.scale_from, args.scale_to), args.points)
        .map_err(CliError::from_input)?;
    let mut csv = String::from("scale,duration_us,fidelity\n");
    for p in &report.points {
        csv.push_str(&format!("{},{},{}\n", p.scale, p.duration_us, p.fidelity));
    }
    write_or_print(&args.out, &csv)?;
    eprintln!(
        "best: fidelity {:.5} at scale {:.4} ({:.4} µs)",
        report.best.fidelity, report.best.scale, report.best.duration_us
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_vqe(args: VqeArgs) -> Result<ExitCode, CliError> {
    let text = std::fs::read_to_string(&args.fixture)
        .map_err(|e| CliError::usage(&format!("cannot read fixture: {e}")))?;
    let h = PairedHamiltonian::from_json(&text).map_err(CliError::from_input)?;

    let backend = match args.backend.as_str() {
        "ideal" => Backend::Ideal,
        "analog" => {
            let spec = args.register.load()?;
            if spec.n_qubits != h.n_qubits {
                return Err(CliError::usage(&format!(
                    "register has {} qubits, fixture needs {}",
                    spec.n_qubits, h.n_qubits
                )));
            }
            let lib = match &args.rotations {
                Some(path) => load_rotation_library(path, "rx+")?,
                None => RotationLibrary::Ideal,
            };
            Backend::Analog { spec, lib }
        }
        other => return Err(CliError::usage(&format!("unknown backend {other:?}"))),
    };

    let ansatz = AnsatzSpec { n_qubits: h.n_qubits, depth: args.depth, backend };
    let cfg = VqeConfig {
        max_iters: args.max_iters,
        rng_seed: args.seed,
        ..Default::default()
    };
    let result = run_vqe(&h, &ansatz, &cfg).map_err(CliError::from_input)?;

    if let Some(trace_path) = &args.trace_out {
        let mut csv = String::from("evaluation,best_energy\n");
        for (i, e) in result.trace.iter().enumerate() {
            csv.push_str(&format!("{},{}\n", i + 1, e));
        }
        std::fs::write(trace_path, csv)
            .map_err(|e| CliError::usage(&format!("cannot write trace: {e}")))?;
    }

    let summary = serde_json::json!({
        "molecule": h.molecule,
        "basis": h.basis,
        "backend": args.backend,
        "depth": args.depth,
        "final_energy": result.final_energy,
        "reference_energy": result.reference_energy,
        "error_mha": result.error * 1000.0,
        "evaluations": result.evaluations,
    });
    let mut text = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::usage(&format!("summary serialization: {e}")))?;
    text.push('\n');
    write_or_print(&args.summary_out, &text)?;
    Ok(ExitCode::SUCCESS)
}
