//! Runs compiled schedules on the physical simulator and compares with the oracle.

use std::fmt;
use std::str::FromStr;

use crate::circuit::LogicalCircuit;
use crate::compiler::Compiled;
use crate::error::{Error, Result};
use crate::logical::LogicalStateVector;
use crate::oracle::{compare_up_to_global_phase, simulate_logical};
use crate::pulses::{apply_global_pulse, PulseSchedule};
use crate::state::{
    decode_well_formed, encode_sparse, encode_well_formed, PhaseLabel, QuantumState,
};
use crate::topology::DeviceTopology;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Dense,
    Sparse,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Dense => "dense",
            Backend::Sparse => "sparse",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Backend::Dense),
            "sparse" => Ok(Backend::Sparse),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("unknown backend `{s}`"),
            }),
        }
    }
}

/// Encodes `psi` in `phase` on the chosen backend.
pub fn prepare(
    psi: &LogicalStateVector,
    phase: PhaseLabel,
    topo: &DeviceTopology,
    backend: Backend,
) -> Result<Box<dyn QuantumState>> {
    Ok(match backend {
        Backend::Dense => Box::new(encode_well_formed(psi, phase, topo)?),
        Backend::Sparse => Box::new(encode_sparse(psi, phase, topo)?),
    })
}

/// Applies `schedule`; when `check_boundaries` is set, decodes after every annotated
/// span and returns the largest residual seen.
pub fn run_schedule(
    state: &mut dyn QuantumState,
    topo: &DeviceTopology,
    schedule: &PulseSchedule,
    check_boundaries: bool,
) -> Result<f64> {
    let mut ends: Vec<usize> = if check_boundaries {
        schedule
            .annotations()
            .iter()
            .map(|a| a.start + a.len)
            .collect()
    } else {
        Vec::new()
    };
    ends.sort_unstable();
    ends.dedup();
    let mut next = ends.iter().peekable();
    let mut worst: f64 = 0.0;
    for (i, p) in schedule.pulses().iter().enumerate() {
        apply_global_pulse(state, topo, p)?;
        if next.peek() == Some(&&(i + 1)) {
            next.next();
            worst = worst.max(decode_well_formed(state, topo)?.residual);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub fidelity: f64,
    pub residual: f64,
    pub max_boundary_residual: f64,
    pub final_phase: PhaseLabel,
}

/// Runs `schedule` from `encode(psi, initial_phase)` and compares the decoded output
/// against the oracle result relabelled by `placement`.
#[allow(clippy::too_many_arguments)]
pub fn verify_schedule(
    circuit: &LogicalCircuit,
    schedule: &PulseSchedule,
    placement: &[usize],
    initial_phase: PhaseLabel,
    topo: &DeviceTopology,
    psi: &LogicalStateVector,
    backend: Backend,
    check_boundaries: bool,
) -> Result<Verification> {
    if placement.len() != circuit.n() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n(),
            actual: placement.len(),
        });
    }
    let mut state = prepare(psi, initial_phase, topo, backend)?;
    let max_boundary_residual = run_schedule(state.as_mut(), topo, schedule, check_boundaries)?;
    let decoded = decode_well_formed(state.as_ref(), topo)?;
    let expected = simulate_logical(circuit, psi)?.permuted(placement);
    let (fidelity, _) = compare_up_to_global_phase(&expected, &decoded.logical)?;
    Ok(Verification {
        fidelity,
        residual: decoded.residual,
        max_boundary_residual,
        final_phase: decoded.phase,
    })
}

pub fn verify_compiled(
    circuit: &LogicalCircuit,
    compiled: &Compiled,
    topo: &DeviceTopology,
    psi: &LogicalStateVector,
    backend: Backend,
    check_boundaries: bool,
) -> Result<Verification> {
    verify_schedule(
        circuit,
        &compiled.schedule,
        compiled.final_placement(),
        compiled.initial_phase,
        topo,
        psi,
        backend,
        check_boundaries,
    )
}
