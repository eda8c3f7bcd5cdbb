//! Time-domain check of the blockade primitive on 3- and 4-qubit fragments.
//!
//! Units: hbar = 1. Fragment qubit 0 is the driven one; bit `i` of a basis index is
//! fragment qubit `i` with `1 = |e>`. Here `sigma_z |e> = +|e>`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rotation::C64;
use crate::topology::{Crossing, DeviceTopology, Family};

/// Fastest phase per step accepted by [`ContinuousModel::validate`].
pub const MAX_PHASE_PER_STEP: f64 = 0.05;
/// Phase per step used by [`ContinuousModel::blockade`].
pub const DEFAULT_PHASE_PER_STEP: f64 = 0.02;

pub const DEFAULT_OMEGA_A: f64 = TAU * 6.5;
pub const DEFAULT_OMEGA_B: f64 = TAU * 5.0;
pub const DEFAULT_ZETA: f64 = TAU * 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Lab,
    RotatingWave,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousModel {
    pub omega_a: f64,
    pub omega_b: f64,
    pub zeta: f64,
    /// Nominal Rabi amplitude; crossed qubits see twice this.
    pub omega_rabi: f64,
    pub omega_drive: f64,
    pub phi: f64,
    pub duration: f64,
    pub frame: Frame,
    pub dt: f64,
}

impl ContinuousModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("omega_drive", self.omega_drive),
            ("dt", self.dt),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidModel(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("zeta", self.zeta),
            ("omega_rabi", self.omega_rabi),
            ("duration", self.duration),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidModel(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        let fastest = (self.omega_a.max(self.omega_b) + self.zeta).max(self.omega_drive);
        if self.dt * fastest >= MAX_PHASE_PER_STEP {
            return Err(Error::InvalidModel(format!(
                "dt = {} does not resolve frequency {fastest} (dt * omega = {})",
                self.dt,
                self.dt * fastest
            )));
        }
        Ok(())
    }

    /// Rectangular pi pulse at `omega_drive = omega - 2 zeta` for the driven qubit,
    /// with `Omega = zeta / eta`.
    pub fn blockade(fragment: &Fragment, eta: f64, frame: Frame) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "eta must be positive, got {eta}"
            )));
        }
        let zeta = DEFAULT_ZETA;
        let omega_rabi = zeta / eta;
        let nominal = match fragment.qubits[0].family {
            Family::A => DEFAULT_OMEGA_A,
            Family::B => DEFAULT_OMEGA_B,
            Family::C => {
                return Err(Error::InvalidModel(
                    "C-family fragments are not modelled".into(),
                ))
            }
        };
        let omega_drive = nominal - 2.0 * zeta;
        let duration = PI / (fragment.rabi_multiplier() * omega_rabi);
        let fastest = (DEFAULT_OMEGA_A.max(DEFAULT_OMEGA_B) + zeta).max(omega_drive);
        let steps = (duration * fastest / DEFAULT_PHASE_PER_STEP)
            .ceil()
            .max(1.0);
        Ok(ContinuousModel {
            omega_a: DEFAULT_OMEGA_A,
            omega_b: DEFAULT_OMEGA_B,
            zeta,
            omega_rabi,
            omega_drive,
            phi: 0.0,
            duration,
            frame,
            dt: duration / steps,
        })
    }

    fn omega_of(&self, family: Family) -> Result<f64> {
        match family {
            Family::A => Ok(self.omega_a),
            Family::B => Ok(self.omega_b),
            Family::C => Err(Error::InvalidModel(
                "C-family fragments are not modelled".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FragmentQubit {
    pub family: Family,
    pub crossing: Crossing,
    pub triangle_corrected: bool,
}

/// A driven qubit (index 0) and its ZZ neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    qubits: Vec<FragmentQubit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FragmentKind {
    /// Sector-center B with two A neighbors.
    TwoNeighbor,
    /// `Q_1` with three A neighbors, triangle corrected.
    ThreeNeighbor,
    /// `Q_1` with the +zeta correction removed.
    ThreeNeighborUncorrected,
}

impl FragmentKind {
    pub fn name(self) -> &'static str {
        match self {
            FragmentKind::TwoNeighbor => "two-neighbor",
            FragmentKind::ThreeNeighbor => "three-neighbor",
            FragmentKind::ThreeNeighborUncorrected => "three-neighbor-uncorrected",
        }
    }
}

impl fmt::Display for FragmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FragmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            FragmentKind::TwoNeighbor,
            FragmentKind::ThreeNeighbor,
            FragmentKind::ThreeNeighborUncorrected,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::InvalidModel(format!("unknown fragment kind `{s}`")))
    }
}

impl Fragment {
    /// `site` and its neighbors, copied from a device.
    pub fn from_topology(topo: &DeviceTopology, site: usize) -> Result<Self> {
        let mut qubits = Vec::new();
        for &i in std::iter::once(&site).chain(topo.neighbors(site)?) {
            let s = topo.site(i)?;
            qubits.push(FragmentQubit {
                family: s.species.family,
                crossing: s.species.crossing,
                triangle_corrected: s.triangle_corrected,
            });
        }
        Self::new(qubits)
    }

    pub fn new(qubits: Vec<FragmentQubit>) -> Result<Self> {
        if !(3..=4).contains(&qubits.len()) {
            return Err(Error::InvalidModel(format!(
                "fragments have 3 or 4 qubits, got {}",
                qubits.len()
            )));
        }
        Ok(Fragment { qubits })
    }

    pub fn of_kind(kind: FragmentKind) -> Self {
        let topo = DeviceTopology::build_conveyor(4).expect("N = 4 is valid");
        match kind {
            FragmentKind::TwoNeighbor => {
                let center = topo.sectors()[0].center_b;
                Self::from_topology(&topo, center).expect("sector center")
            }
            FragmentKind::ThreeNeighbor => Self::from_topology(&topo, topo.q(1)).expect("Q_1"),
            FragmentKind::ThreeNeighborUncorrected => {
                let mut f = Self::from_topology(&topo, topo.q(1)).expect("Q_1");
                f.qubits[0].triangle_corrected = false;
                f
            }
        }
    }

    pub fn qubits(&self) -> &[FragmentQubit] {
        &self.qubits
    }

    pub fn n_neighbors(&self) -> usize {
        self.qubits.len() - 1
    }

    fn rabi_multiplier(&self) -> f64 {
        self.qubits[0].crossing.rabi_multiplier()
    }

    fn dim(&self) -> usize {
        1 << self.qubits.len()
    }

    /// Diagonal of `H_0` (lab frame) or of the rotating-frame Hamiltonian.
    fn diagonal(&self, model: &ContinuousModel) -> Result<Vec<f64>> {
        let omegas: Vec<f64> = self
            .qubits
            .iter()
            .map(|q| {
                let w = model.omega_of(q.family)?;
                Ok(if q.triangle_corrected {
                    w + model.zeta
                } else {
                    w
                })
            })
            .collect::<Result<_>>()?;
        let z = |idx: usize, i: usize| if idx >> i & 1 == 1 { 1.0 } else { -1.0 };
        Ok((0..self.dim())
            .map(|idx| {
                let mut e: f64 = omegas
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w / 2.0 * z(idx, i))
                    .sum();
                for j in 1..self.qubits.len() {
                    e += model.zeta / 2.0 * z(idx, 0) * z(idx, j);
                }
                if model.frame == Frame::RotatingWave {
                    e -= model.omega_drive / 2.0 * z(idx, 0);
                }
                e
            })
            .collect())
    }

    /// `<e|H|g>` on the driven qubit at time `t`.
    fn coupling(&self, model: &ContinuousModel, t: f64) -> C64 {
        let amp = self.rabi_multiplier() * model.omega_rabi;
        match model.frame {
            // sigma_y: <e|sigma_y|g> = -i
            Frame::Lab => C64::new(0.0, -amp * (model.omega_drive * t + model.phi).sin()),
            Frame::RotatingWave => C64::from_polar(amp / 2.0, -model.phi),
        }
    }
}

/// `H(t)` as a dense matrix in the chosen frame.
pub fn build_hamiltonian(
    fragment: &Fragment,
    model: &ContinuousModel,
    t: f64,
) -> Result<DMatrix<C64>> {
    let dim = fragment.dim();
    let diag = fragment.diagonal(model)?;
    let v = fragment.coupling(model, t);
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for g in (0..dim).filter(|i| i & 1 == 0) {
        let e = g | 1;
        h[(g, g)] = C64::new(diag[g], 0.0);
        h[(e, e)] = C64::new(diag[e], 0.0);
        h[(e, g)] = v;
        h[(g, e)] = v.conj();
    }
    Ok(h)
}

/// Integrates `i d psi/dt = H(t) psi` over `model.duration`. The diagonal part is
/// propagated exactly; RK4 handles the drive in the interaction picture.
pub fn evolve(
    psi: &DVector<C64>,
    fragment: &Fragment,
    model: &ContinuousModel,
) -> Result<DVector<C64>> {
    model.validate()?;
    let dim = fragment.dim();
    if psi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: psi.len(),
        });
    }
    let diag = fragment.diagonal(model)?;
    // transition frequency for each (g, e) pair
    let pairs: Vec<(usize, f64)> = (0..dim)
        .filter(|i| i & 1 == 0)
        .map(|g| (g, diag[g | 1] - diag[g]))
        .collect();
    let steps = (model.duration / model.dt).round() as usize;
    let dt = if steps > 0 {
        model.duration / steps as f64
    } else {
        0.0
    };

    let mut y: Vec<C64> = psi.iter().copied().collect();
    let rhs = |t: f64, y: &[C64], out: &mut [C64]| {
        let v = fragment.coupling(model, t);
        for &(g, w) in &pairs {
            let ve = v * C64::from_polar(1.0, w * t);
            // dy/dt = -i V_I y
            out[g | 1] = C64::new(0.0, -1.0) * ve * y[g];
            out[g] = C64::new(0.0, -1.0) * ve.conj() * y[g | 1];
        }
    };
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![C64::default(); dim],
        vec![C64::default(); dim],
        vec![C64::default(); dim],
        vec![C64::default(); dim],
    );
    let mut tmp = vec![C64::default(); dim];
    for s in 0..steps {
        let t = s as f64 * dt;
        rhs(t, &y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + k1[i] * (dt / 2.0);
        }
        rhs(t + dt / 2.0, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + k2[i] * (dt / 2.0);
        }
        rhs(t + dt / 2.0, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + k3[i] * dt;
        }
        rhs(t + dt, &tmp, &mut k4);
        for i in 0..dim {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    let t_end = steps as f64 * dt;
    Ok(DVector::from_iterator(
        dim,
        y.iter()
            .zip(&diag)
            .map(|(a, &e)| a * C64::from_polar(1.0, -e * t_end)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockadeRecord {
    /// Flip probability with every neighbor in `|g>`.
    pub p_flip_gg: f64,
    /// Worst flip probability with exactly one neighbor excited.
    pub p_leak_ge: f64,
    /// Worst flip probability with two or more neighbors excited.
    pub p_leak_ee: f64,
}

impl BlockadeRecord {
    pub fn total_error(&self) -> f64 {
        (1.0 - self.p_flip_gg) + self.p_leak_ge + self.p_leak_ee
    }
}

pub fn blockade_fidelity(fragment: &Fragment, model: &ContinuousModel) -> Result<BlockadeRecord> {
    let dim = fragment.dim();
    let flips: Vec<(u32, f64)> = (0..dim)
        .filter(|i| i & 1 == 0)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|g| {
            let psi = DVector::from_fn(dim, |i, _| C64::new((i == g) as u8 as f64, 0.0));
            let out = evolve(&psi, fragment, model)?;
            Ok(((g >> 1).count_ones(), out[g | 1].norm_sqr()))
        })
        .collect::<Result<_>>()?;
    let worst = |pred: &dyn Fn(u32) -> bool| {
        flips
            .iter()
            .filter(|(k, _)| pred(*k))
            .map(|&(_, p)| p)
            .fold(0.0, f64::max)
    };
    Ok(BlockadeRecord {
        p_flip_gg: worst(&|k| k == 0),
        p_leak_ge: worst(&|k| k == 1),
        p_leak_ee: worst(&|k| k >= 2),
    })
}

/// One row per eta, in input order (duplicates kept).
pub fn sweep_blockade(
    etas: &[f64],
    kind: FragmentKind,
    frame: Frame,
) -> Result<Vec<(f64, BlockadeRecord)>> {
    let fragment = Fragment::of_kind(kind);
    etas.par_iter()
        .map(|&eta| {
            let model = ContinuousModel::blockade(&fragment, eta, frame)?;
            Ok((eta, blockade_fidelity(&fragment, &model)?))
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[(f64, BlockadeRecord)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eta", "p_flip_gg", "p_leak_ge", "p_leak_ee"])?;
    for (eta, r) in rows {
        w.write_record([*eta, r.p_flip_gg, r.p_leak_ge, r.p_leak_ee].map(|x| format!("{x:.11e}")))?;
    }
    w.flush()?;
    Ok(())
}
