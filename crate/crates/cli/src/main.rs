mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use conveyor_core::compiler::parse_placement_trailer;
use conveyor_core::hamiltonian::{sweep_blockade, write_sweep_csv, FragmentKind, Frame};
use conveyor_core::pulses::apply_schedule;
use conveyor_core::state::dump::{read_csv, write_csv};
use conveyor_core::verify::{prepare, verify_schedule};
use conveyor_core::{
    compile, decode_well_formed, Backend, Design, DeviceTopology, Error, LogicalCircuit,
    LogicalStateVector, PhaseLabel, PulseSchedule, PureState, QuantumState, SparseState,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use report::RunReport;

/// Largest device the dense backend will allocate (2^28 amplitudes, 4 GiB).
const MAX_DENSE_SITES: usize = 28;

#[derive(Parser)]
#[command(
    name = "conveyor",
    version,
    about = "Conveyor-belt quantum processor simulator and compiler"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a device topology and write it as JSON.
    Topology {
        #[arg(long)]
        n: usize,
        /// baseline, two_coupler_three_species or two_coupler_double_crossed
        #[arg(long, default_value = "baseline")]
        variant: Design,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a pulse schedule and dump the final state.
    Run {
        #[arg(long)]
        topology: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Logical-state CSV (`index,re,im`) to encode; starts from all-ground if absent.
        #[arg(long, conflicts_with = "random")]
        logical: Option<PathBuf>,
        /// Encode a seeded random logical state instead of reading one.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value = "FP")]
        phase: PhaseLabel,
        #[arg(long, default_value = "sparse")]
        backend: Backend,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a logical circuit to a pulse schedule.
    Compile {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a compiled schedule against the oracle on a seeded random input.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        n: usize,
        /// Verify this schedule (with its placement trailer) instead of compiling.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long, default_value = "sparse")]
        backend: Backend,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Accepted infidelity.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Accepted decode residual at every macro boundary.
        #[arg(long, default_value_t = 1e-9)]
        residual_tolerance: f64,
    },
    /// Sweep the blockade ratio on a continuous-time fragment and write CSV.
    BlockadeSweep {
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
        etas: Vec<f64>,
        /// two-neighbor, three-neighbor or three-neighbor-uncorrected
        #[arg(long, default_value = "two-neighbor")]
        kind: FragmentKind,
        #[arg(long, value_enum, default_value_t = FrameArg::Lab)]
        frame: FrameArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameArg {
    Lab,
    Rwa,
}

impl From<FrameArg> for Frame {
    fn from(f: FrameArg) -> Frame {
        match f {
            FrameArg::Lab => Frame::Lab,
            FrameArg::Rwa => Frame::RotatingWave,
        }
    }
}

fn read_input(path: &Path, report: &mut RunReport) -> Result<Vec<u8>, Error> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    report.record_input(path, &bytes);
    Ok(bytes)
}

fn read_text(path: &Path, report: &mut RunReport) -> Result<String, Error> {
    String::from_utf8(read_input(path, report)?)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(bytes).map_err(Error::from),
    }
}

fn check_dense(topo: &DeviceTopology, backend: Backend) -> Result<(), Error> {
    if backend == Backend::Dense && topo.n_sites() > MAX_DENSE_SITES {
        return Err(Error::Io(format!(
            "dense backend limited to {MAX_DENSE_SITES} sites, device has {}; use --backend sparse",
            topo.n_sites()
        )));
    }
    Ok(())
}

fn cmd_topology(
    n: usize,
    variant: Design,
    out: Option<&Path>,
    report: &mut RunReport,
) -> Result<(), Error> {
    let topo = match variant {
        Design::Baseline => DeviceTopology::build_conveyor(n)?,
        v => DeviceTopology::build_variant(v, n)?,
    };
    let json = topo.to_json();
    DeviceTopology::from_json(&json)?;
    report.message = Some(format!(
        "{} sites, {} edges",
        topo.n_sites(),
        topo.edges().len()
    ));
    write_output(out, format!("{json}\n").as_bytes())
}

fn load_logical(
    path: &Path,
    n: usize,
    report: &mut RunReport,
) -> Result<LogicalStateVector, Error> {
    let bytes = read_input(path, report)?;
    let sparse = read_csv(n, bytes.as_slice())?;
    let mut amps = vec![Default::default(); 1 << n];
    for (k, a) in sparse.sorted_entries() {
        amps[k as usize] = a;
    }
    LogicalStateVector::new(n, amps)
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    topology: &Path,
    schedule: &Path,
    logical: Option<&Path>,
    random: bool,
    phase: PhaseLabel,
    backend: Backend,
    seed: u64,
    out: Option<&Path>,
    report: &mut RunReport,
) -> Result<(), Error> {
    let topo = DeviceTopology::from_json(&read_text(topology, report)?)?;
    let sched = PulseSchedule::parse(&read_text(schedule, report)?)?;
    check_dense(&topo, backend)?;
    report.pulse_count = Some(sched.len());
    let psi = if random {
        report.seed = Some(seed);
        Some(LogicalStateVector::random(
            topo.n_logical(),
            &mut ChaCha8Rng::seed_from_u64(seed),
        ))
    } else {
        logical
            .map(|p| load_logical(p, topo.n_logical(), report))
            .transpose()?
    };
    let mut state: Box<dyn QuantumState> = match (psi, backend) {
        (Some(psi), b) => prepare(&psi, phase, &topo, b)?,
        (None, Backend::Dense) => Box::new(PureState::all_ground(topo.n_sites())),
        (None, Backend::Sparse) => Box::new(SparseState::all_ground(topo.n_sites())),
    };
    apply_schedule(state.as_mut(), &topo, &sched)?;
    match decode_well_formed(state.as_ref(), &topo) {
        Ok(d) => {
            report.residual = Some(d.residual);
            report.final_phase = Some(d.phase.to_string());
        }
        Err(Error::NotWellFormed { residual }) => {
            report.residual = Some(residual);
            report.message = Some("final state is not well-formed".into());
        }
        Err(e) => return Err(e),
    }
    let mut buf = Vec::new();
    write_csv(state.as_ref(), &mut buf)?;
    write_output(out, &buf)
}

fn cmd_compile(
    circuit: &Path,
    n: usize,
    out: Option<&Path>,
    report: &mut RunReport,
) -> Result<(), Error> {
    let circ = LogicalCircuit::parse(n, &read_text(circuit, report)?)?;
    let topo = DeviceTopology::build_conveyor(n)?;
    let compiled = compile(&circ, &topo)?;
    report.pulse_count = Some(compiled.pulse_count());
    report.final_phase = Some(compiled.final_phase().to_string());
    report.final_placement = Some(compiled.final_placement().iter().map(|p| p + 1).collect());
    write_output(out, compiled.to_text().as_bytes())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    circuit: &Path,
    n: usize,
    schedule: Option<&Path>,
    backend: Backend,
    seed: u64,
    tolerance: f64,
    residual_tolerance: f64,
    report: &mut RunReport,
) -> Result<(), Error> {
    let circ = LogicalCircuit::parse(n, &read_text(circuit, report)?)?;
    let topo = DeviceTopology::build_conveyor(n)?;
    check_dense(&topo, backend)?;
    let (sched, placement) = match schedule {
        Some(p) => {
            let text = read_text(p, report)?;
            let placement = parse_placement_trailer(&text).ok_or_else(|| Error::Parse {
                line: 0,
                message: "schedule lacks a `# final_placement:` trailer".into(),
            })?;
            (PulseSchedule::parse(&text)?, placement)
        }
        None => {
            let c = compile(&circ, &topo)?;
            let placement = c.final_placement().to_vec();
            (c.schedule, placement)
        }
    };
    report.seed = Some(seed);
    report.pulse_count = Some(sched.len());
    let psi = LogicalStateVector::random(n, &mut ChaCha8Rng::seed_from_u64(seed));
    match verify_schedule(
        &circ,
        &sched,
        &placement,
        PhaseLabel::FP,
        &topo,
        &psi,
        backend,
        true,
    ) {
        Ok(v) => {
            report.fidelity = Some(v.fidelity);
            report.residual = Some(v.residual);
            report.max_boundary_residual = Some(v.max_boundary_residual);
            report.final_phase = Some(v.final_phase.to_string());
            if v.fidelity < 1.0 - tolerance {
                report.fail_threshold(format!("fidelity {} below 1 - {tolerance:e}", v.fidelity));
            } else if v.max_boundary_residual.max(v.residual) > residual_tolerance {
                report.fail_threshold(format!(
                    "macro boundary residual {} above {residual_tolerance:e}",
                    v.max_boundary_residual.max(v.residual)
                ));
            }
        }
        Err(Error::NotWellFormed { residual }) => {
            report.fidelity = Some(0.0);
            report.residual = Some(residual);
            report.fail_threshold(format!(
                "state left the well-formed subspace (residual {residual:e})"
            ));
        }
        Err(e) => return Err(e),
    }
    println!("fidelity {}", report.fidelity.unwrap_or(0.0));
    Ok(())
}

fn cmd_blockade_sweep(
    etas: &[f64],
    kind: FragmentKind,
    frame: Frame,
    out: Option<&Path>,
) -> Result<(), Error> {
    let rows = sweep_blockade(etas, kind, frame)?;
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf)?;
    write_output(out, &buf)
}

type Job = Box<dyn FnOnce(&mut RunReport) -> Result<(), Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, run): (&'static str, Job) = match cli.command {
        Command::Topology { n, variant, out } => (
            "topology",
            Box::new(move |r| cmd_topology(n, variant, out.as_deref(), r)),
        ),
        Command::Run {
            topology,
            schedule,
            logical,
            random,
            phase,
            backend,
            seed,
            out,
        } => (
            "run",
            Box::new(move |r| {
                cmd_run(
                    &topology,
                    &schedule,
                    logical.as_deref(),
                    random,
                    phase,
                    backend,
                    seed,
                    out.as_deref(),
                    r,
                )
            }),
        ),
        Command::Compile { circuit, n, out } => (
            "compile",
            Box::new(move |r| cmd_compile(&circuit, n, out.as_deref(), r)),
        ),
        Command::Verify {
            circuit,
            n,
            schedule,
            backend,
            seed,
            tolerance,
            residual_tolerance,
        } => (
            "verify",
            Box::new(move |r| {
                cmd_verify(
                    &circuit,
                    n,
                    schedule.as_deref(),
                    backend,
                    seed,
                    tolerance,
                    residual_tolerance,
                    r,
                )
            }),
        ),
        Command::BlockadeSweep {
            etas,
            kind,
            frame,
            out,
        } => (
            "blockade-sweep",
            Box::new(move |_| cmd_blockade_sweep(&etas, kind, frame.into(), out.as_deref())),
        ),
    };
    let mut report = RunReport::start(name);
    if let Err(e) = run(&mut report) {
        report.fail_error(e.to_string());
    }
    ExitCode::from(report.finish() as u8)
}
