use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{PureState, QuantumState, SparseState, DEFAULT_PRUNE_TOLERANCE};
use crate::error::{Error, Result};
use crate::logical::LogicalStateVector;
use crate::rotation::C64;
use crate::topology::DeviceTopology;

/// Largest out-of-subspace L2 residual accepted by [`decode_well_formed`].
pub const DECODE_TOLERANCE: f64 = 1e-9;

/// Which sectors are ferromagnetic. `FP`: S_1, S_3, … are `|F>` and S_2, S_4, … are `|P>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    FP,
    PF,
}

impl PhaseLabel {
    pub fn flipped(self) -> Self {
        match self {
            PhaseLabel::FP => PhaseLabel::PF,
            PhaseLabel::PF => PhaseLabel::FP,
        }
    }

    /// Phase after `times` flips.
    pub fn flipped_n(self, times: usize) -> Self {
        if times.is_multiple_of(2) {
            self
        } else {
            self.flipped()
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseLabel::FP => "FP",
            PhaseLabel::PF => "PF",
        })
    }
}

impl FromStr for PhaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FP" => Ok(PhaseLabel::FP),
            "PF" => Ok(PhaseLabel::PF),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("unknown phase label `{s}`"),
            }),
        }
    }
}

/// Bits of the sector-center B sites that are excited (`|P> = |geg>`) in `phase`.
pub fn paramagnetic_mask(topo: &DeviceTopology, phase: PhaseLabel) -> u64 {
    let want_odd = phase == PhaseLabel::FP;
    topo.sectors()
        .iter()
        .enumerate()
        .filter(|(j, _)| (j % 2 == 1) == want_odd)
        .fold(0u64, |m, (_, s)| m | 1 << s.center_b)
}

/// Physical basis index of `|k; phase; g>`.
pub fn well_formed_index(topo: &DeviceTopology, k: usize, phase: PhaseLabel) -> u64 {
    let mut idx = paramagnetic_mask(topo, phase);
    for (j, &site) in topo.ic_sites().iter().enumerate() {
        if k >> j & 1 == 1 {
            idx |= 1 << site;
        }
    }
    idx
}

fn check_n(psi: &LogicalStateVector, topo: &DeviceTopology) -> Result<()> {
    if psi.n() != topo.n_logical() {
        return Err(Error::DimensionMismatch {
            expected: topo.n_logical(),
            actual: psi.n(),
        });
    }
    Ok(())
}

/// Dense `sum_k Psi_k |k; phase; g>`.
pub fn encode_well_formed(
    psi: &LogicalStateVector,
    phase: PhaseLabel,
    topo: &DeviceTopology,
) -> Result<PureState> {
    check_n(psi, topo)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << topo.n_sites()];
    for (k, &a) in psi.amplitudes().iter().enumerate() {
        amps[well_formed_index(topo, k, phase) as usize] = a;
    }
    PureState::from_amplitudes(topo.n_sites(), amps)
}

/// Sparse counterpart of [`encode_well_formed`].
pub fn encode_sparse(
    psi: &LogicalStateVector,
    phase: PhaseLabel,
    topo: &DeviceTopology,
) -> Result<SparseState> {
    check_n(psi, topo)?;
    let entries = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, &a)| (well_formed_index(topo, k, phase), a));
    Ok(SparseState::from_entries(
        topo.n_sites(),
        entries,
        DEFAULT_PRUNE_TOLERANCE,
    ))
}

/// Result of [`decode_well_formed`]. `logical * exp(i global_phase)` reproduces the
/// projected amplitudes; `logical` has its largest component real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub logical: LogicalStateVector,
    pub phase: PhaseLabel,
    pub global_phase: f64,
    pub residual: f64,
}

/// Weight outside the well-formed subspace of `phase`, summed directly.
fn out_weight<S: QuantumState + ?Sized>(
    state: &S,
    topo: &DeviceTopology,
    phase: PhaseLabel,
) -> f64 {
    let frame = !topo.ic_mask();
    let pattern = paramagnetic_mask(topo, phase);
    let mut acc = 0.0;
    state.for_each_amplitude(&mut |i, a| {
        if i & frame != pattern {
            acc += a.norm_sqr();
        }
    });
    acc
}

pub fn decode_well_formed<S: QuantumState + ?Sized>(
    state: &S,
    topo: &DeviceTopology,
) -> Result<Decoded> {
    if state.n_qubits() != topo.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: topo.n_sites(),
            actual: state.n_qubits(),
        });
    }
    let w_fp = out_weight(state, topo, PhaseLabel::FP);
    let w_pf = out_weight(state, topo, PhaseLabel::PF);
    let (phase, out) = if w_fp <= w_pf {
        (PhaseLabel::FP, w_fp)
    } else {
        (PhaseLabel::PF, w_pf)
    };
    let residual = out.sqrt();
    if residual > DECODE_TOLERANCE {
        return Err(Error::NotWellFormed { residual });
    }

    let n = topo.n_logical();
    let amps: Vec<C64> = (0..1usize << n)
        .map(|k| state.amplitude(well_formed_index(topo, k, phase)))
        .collect();
    let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let reference = amps
        .iter()
        .find(|a| a.norm() >= max - 1e-9)
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let (global_phase, gauge) = if reference.norm() > 0.0 {
        (reference.arg(), reference.conj() / reference.norm())
    } else {
        (0.0, C64::new(1.0, 0.0))
    };
    let logical = LogicalStateVector::unchecked(n, amps.into_iter().map(|a| a * gauge).collect())?;
    Ok(Decoded {
        logical,
        phase,
        global_phase,
        residual,
    })
}
