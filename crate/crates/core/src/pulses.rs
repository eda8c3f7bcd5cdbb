//! Global pulses `W_xi(theta, n)`: one rotation applied to every qubit of a class,
//! each conditioned on all of its neighbors being `|g>`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rotation::{check_angle, rotation_matrix, Axis};
use crate::state::QuantumState;
use crate::topology::{Crossing, DeviceTopology, Family, Species};

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetClass {
    ARegular,
    ACrossed,
    BRegular,
    BCrossed,
    BAll,
    CRegular,
    CCrossed,
    ADoubleCrossed,
    InitLine,
}

impl TargetClass {
    pub const ALL: [TargetClass; 9] = [
        TargetClass::ARegular,
        TargetClass::ACrossed,
        TargetClass::BRegular,
        TargetClass::BCrossed,
        TargetClass::BAll,
        TargetClass::CRegular,
        TargetClass::CCrossed,
        TargetClass::ADoubleCrossed,
        TargetClass::InitLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TargetClass::ARegular => "A_regular",
            TargetClass::ACrossed => "A_crossed",
            TargetClass::BRegular => "B_regular",
            TargetClass::BCrossed => "B_crossed",
            TargetClass::BAll => "B_all",
            TargetClass::CRegular => "C_regular",
            TargetClass::CCrossed => "C_crossed",
            TargetClass::ADoubleCrossed => "A_double_crossed",
            TargetClass::InitLine => "INIT_LINE",
        }
    }

    fn species(self) -> Option<Species> {
        let sp = |family, crossing| Some(Species { family, crossing });
        match self {
            TargetClass::ARegular => sp(Family::A, Crossing::Regular),
            TargetClass::ACrossed => sp(Family::A, Crossing::Crossed),
            TargetClass::BRegular => sp(Family::B, Crossing::Regular),
            TargetClass::BCrossed => sp(Family::B, Crossing::Crossed),
            TargetClass::CRegular => sp(Family::C, Crossing::Regular),
            TargetClass::CCrossed => sp(Family::C, Crossing::Crossed),
            TargetClass::ADoubleCrossed => sp(Family::A, Crossing::DoubleCrossed),
            TargetClass::BAll | TargetClass::InitLine => None,
        }
    }

    /// Sites addressed by this class, in application order.
    pub fn sites(self, topo: &DeviceTopology) -> Vec<usize> {
        let of = |species: Species| -> Vec<usize> {
            topo.sites()
                .iter()
                .filter(|s| s.species == species)
                .map(|s| s.index)
                .collect()
        };
        match self {
            TargetClass::BAll => {
                let mut v = TargetClass::BRegular.sites(topo);
                v.extend(TargetClass::BCrossed.sites(topo));
                v
            }
            TargetClass::InitLine => topo.init_targets().to_vec(),
            other => of(other.species().expect("species class")),
        }
    }
}

impl fmt::Display for TargetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TargetClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("unknown target class `{s}`"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalPulse {
    pub target: TargetClass,
    pub theta: f64,
    pub axis: Axis,
}

impl GlobalPulse {
    pub fn new(target: TargetClass, theta: f64, axis: Axis) -> Result<Self> {
        check_angle(theta)?;
        Ok(GlobalPulse {
            target,
            theta,
            axis,
        })
    }

    pub fn inverse(&self) -> Self {
        GlobalPulse {
            theta: -self.theta,
            ..*self
        }
    }

    pub fn to_line(&self) -> String {
        let [x, y, z] = self.axis.components();
        format!(
            "PULSE {} theta={:.16e} axis={:.16e},{:.16e},{:.16e}",
            self.target, self.theta, x, y, z
        )
    }
}

/// Named span of a schedule produced by one macro.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroSpan {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PulseSchedule {
    pulses: Vec<GlobalPulse>,
    annotations: Vec<MacroSpan>,
}

impl PulseSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pulses(pulses: Vec<GlobalPulse>) -> Self {
        PulseSchedule {
            pulses,
            annotations: Vec::new(),
        }
    }

    pub fn pulses(&self) -> &[GlobalPulse] {
        &self.pulses
    }

    pub fn annotations(&self) -> &[MacroSpan] {
        &self.annotations
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn push(&mut self, pulse: GlobalPulse) {
        self.pulses.push(pulse);
    }

    /// Appends `other`, keeping its annotations (shifted).
    pub fn append(&mut self, other: &PulseSchedule) {
        let off = self.pulses.len();
        self.pulses.extend_from_slice(&other.pulses);
        self.annotations
            .extend(other.annotations.iter().map(|a| MacroSpan {
                name: a.name.clone(),
                start: a.start + off,
                len: a.len,
            }));
    }

    /// Appends `other` as a single annotated span named `name`.
    pub fn append_macro(&mut self, name: &str, other: &PulseSchedule) {
        let start = self.pulses.len();
        self.pulses.extend_from_slice(&other.pulses);
        self.annotations.push(MacroSpan {
            name: name.to_string(),
            start,
            len: other.len(),
        });
    }

    pub fn repeated(&self, times: usize) -> PulseSchedule {
        let mut out = PulseSchedule::new();
        for _ in 0..times {
            out.append(self);
        }
        out
    }

    /// Reversed order with every angle negated.
    pub fn inverse(&self) -> PulseSchedule {
        PulseSchedule::from_pulses(self.pulses.iter().rev().map(|p| p.inverse()).collect())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.pulses {
            s.push_str(&p.to_line());
            s.push('\n');
        }
        s
    }

    /// Parses the line format; `MACRO` lines expand to annotated spans.
    pub fn parse(text: &str) -> Result<PulseSchedule> {
        let mut out = PulseSchedule::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut words = line.split_whitespace();
            match words.next() {
                Some("PULSE") => {
                    let class = words
                        .next()
                        .ok_or_else(|| bad("missing target class".into()))?;
                    let target = class
                        .parse::<TargetClass>()
                        .map_err(|e| bad(e.to_string()))?;
                    let (mut theta, mut axis) = (None, None);
                    for w in words {
                        let (k, v) = w
                            .split_once('=')
                            .ok_or_else(|| bad(format!("expected key=value, got `{w}`")))?;
                        match k {
                            "theta" => {
                                theta =
                                    Some(v.parse::<f64>().map_err(|e| bad(format!("theta: {e}")))?)
                            }
                            "axis" => {
                                let c: Vec<f64> = v
                                    .split(',')
                                    .map(|x| x.trim().parse::<f64>())
                                    .collect::<std::result::Result<_, _>>()
                                    .map_err(|e| bad(format!("axis: {e}")))?;
                                if c.len() != 3 {
                                    return Err(bad("axis needs 3 components".into()));
                                }
                                axis = Some(
                                    Axis::new(c[0], c[1], c[2]).map_err(|e| bad(e.to_string()))?,
                                );
                            }
                            _ => return Err(bad(format!("unknown key `{k}`"))),
                        }
                    }
                    let theta = theta.ok_or_else(|| bad("missing theta".into()))?;
                    let axis = axis.ok_or_else(|| bad("missing axis".into()))?;
                    let p =
                        GlobalPulse::new(target, theta, axis).map_err(|e| bad(e.to_string()))?;
                    out.push(p);
                }
                Some("MACRO") => {
                    let name = words
                        .next()
                        .ok_or_else(|| bad("missing macro name".into()))?;
                    let body = match name {
                        "EXC" => seq_exchange(),
                        "EXC_INV" => seq_exchange_inverse(),
                        "CCZ" => seq_ccz(),
                        "TOFFOLI" => seq_toffoli(),
                        "INIT" => seq_init(),
                        _ => return Err(bad(format!("unknown macro `{name}`"))),
                    };
                    if words.next().is_some() {
                        return Err(bad("trailing tokens after macro name".into()));
                    }
                    out.append_macro(name, &body);
                }
                Some(other) => return Err(bad(format!("unknown directive `{other}`"))),
                None => unreachable!(),
            }
        }
        Ok(out)
    }
}

fn pulse(target: TargetClass, theta: f64, axis: Axis) -> GlobalPulse {
    GlobalPulse {
        target,
        theta,
        axis,
    }
}

/// `Pi_B = W_B(pi, x)` over regular and crossed B sites.
pub fn pi_b() -> GlobalPulse {
    pulse(TargetClass::BAll, PI, Axis::X)
}

/// `Pi_{A^r} = W_{A^r}(pi, x)`.
pub fn pi_a_regular() -> GlobalPulse {
    pulse(TargetClass::ARegular, PI, Axis::X)
}

/// `(Pi_B Pi_{A^r})^4`, with `Pi_{A^r}` applied first.
pub fn seq_exchange() -> PulseSchedule {
    let mut v = Vec::with_capacity(8);
    for _ in 0..4 {
        v.push(pi_a_regular());
        v.push(pi_b());
    }
    PulseSchedule::from_pulses(v)
}

/// `Pi_B Pi_exc Pi_B`.
pub fn seq_exchange_inverse() -> PulseSchedule {
    let mut v = vec![pi_b()];
    v.extend_from_slice(seq_exchange().pulses());
    v.push(pi_b());
    PulseSchedule::from_pulses(v)
}

pub fn seq_ccz() -> PulseSchedule {
    seq_ccz_axis(Axis::X)
}

pub fn seq_ccz_axis(axis: Axis) -> PulseSchedule {
    PulseSchedule::from_pulses(vec![pulse(TargetClass::ACrossed, 2.0 * PI, axis)])
}

/// `T_{13->2}`: Q_1, Q_3 control, Q_2 target.
pub fn seq_toffoli() -> PulseSchedule {
    let h = pulse(TargetClass::BCrossed, PI, Axis::HADAMARD);
    let b = pi_b();
    let z = pulse(TargetClass::ACrossed, 2.0 * PI, Axis::X);
    PulseSchedule::from_pulses(vec![h, b, z, b, h])
}

pub fn seq_single_qubit_at_q2(theta: f64, axis: Axis) -> Result<PulseSchedule> {
    Ok(PulseSchedule::from_pulses(vec![GlobalPulse::new(
        TargetClass::BCrossed,
        theta,
        axis,
    )?]))
}

pub fn seq_init() -> PulseSchedule {
    PulseSchedule::from_pulses(vec![pulse(TargetClass::InitLine, PI, Axis::X)])
}

pub fn apply_global_pulse<S: QuantumState + ?Sized>(
    state: &mut S,
    topo: &DeviceTopology,
    p: &GlobalPulse,
) -> Result<()> {
    if state.n_qubits() != topo.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: topo.n_sites(),
            actual: state.n_qubits(),
        });
    }
    check_angle(p.theta)?;
    if p.target == TargetClass::InitLine && topo.design().is_variant() {
        return Err(Error::BaselineRequired);
    }
    let sites = p.target.sites(topo);
    if sites.is_empty() {
        return Err(Error::EmptyTargetClass(p.target.name().to_string()));
    }
    let m = rotation_matrix(p.theta, &p.axis);
    for site in sites {
        let mask = if p.target == TargetClass::InitLine {
            0
        } else {
            topo.neighbor_mask(site)?
        };
        state.apply_masked(site, mask, &m);
    }
    Ok(())
}

pub fn apply_schedule<S: QuantumState + ?Sized>(
    state: &mut S,
    topo: &DeviceTopology,
    schedule: &PulseSchedule,
) -> Result<()> {
    for p in schedule.pulses() {
        apply_global_pulse(state, topo, p)?;
    }
    Ok(())
}
