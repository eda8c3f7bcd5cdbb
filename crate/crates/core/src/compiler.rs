//! Lowering of logical circuits to global-pulse schedules.
//!
//! Logical qubits are 1-based in public signatures, matching [`LogicalGate`].
//! Positions are 0-based: position `p` is IC site `Q_{p+1}`.

use std::collections::{HashMap, VecDeque};

use crate::circuit::{LogicalCircuit, LogicalGate};
use crate::error::{Error, Result};
use crate::pulses::{
    seq_exchange, seq_exchange_inverse, seq_single_qubit_at_q2, seq_toffoli, PulseSchedule,
};
use crate::rotation::Axis;
use crate::state::PhaseLabel;
use crate::topology::DeviceTopology;

use std::f64::consts::PI;

/// Position of `Q_2`.
const Q2: usize = 1;

fn step(pos: usize, phase: PhaseLabel, n: usize) -> usize {
    let forward = pos.is_multiple_of(2) == (phase == PhaseLabel::FP);
    if forward {
        (pos + 1) % n
    } else {
        (pos + n - 1) % n
    }
}

/// `v[o]` is the position reached after `ell` exchange rotations by the state that
/// started at position `o`, beginning in `start`.
pub fn permutation_after(ell: usize, start: PhaseLabel, n: usize) -> Vec<usize> {
    (0..n)
        .map(|o| {
            let forward = (o % 2 == 0) == (start == PhaseLabel::FP);
            let l = ell % n;
            if forward {
                (o + l) % n
            } else {
                (o + n - l) % n
            }
        })
        .collect()
}

/// Smallest `ell` that rotates the state at Q_j (1-based) into `Q_2`.
pub fn route_to_q2(j: usize, phase: PhaseLabel, n: usize) -> usize {
    (0..n)
        .find(|&l| permutation_after(l, phase, n)[j - 1] == Q2)
        .expect("every position reaches Q_2 within N steps")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingState {
    /// `placement[q]` is the position of logical qubit `q + 1`.
    pub placement: Vec<usize>,
    pub phase: PhaseLabel,
    pub pulse_count: usize,
}

impl RoutingState {
    pub fn identity(n: usize, phase: PhaseLabel) -> Self {
        RoutingState {
            placement: (0..n).collect(),
            phase,
            pulse_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.placement.len()
    }

    /// Logical qubit (1-based) sitting at `pos`.
    pub fn occupant(&self, pos: usize) -> usize {
        self.placement
            .iter()
            .position(|&p| p == pos)
            .expect("bijection")
            + 1
    }

    pub fn position(&self, q: usize) -> usize {
        self.placement[q - 1]
    }

    fn apply_move(&mut self, m: Move) {
        let n = self.n();
        match m {
            Move::Exc => {
                let ph = self.phase;
                self.placement.iter_mut().for_each(|p| *p = step(*p, ph, n));
                self.phase = ph.flipped();
            }
            Move::ExcInv => {
                let ph = self.phase.flipped();
                self.placement.iter_mut().for_each(|p| *p = step(*p, ph, n));
                self.phase = ph;
            }
            Move::SwapQ1Q2 | Move::SwapQ2Q3 | Move::SwapQ1Q3 => {
                let (x, y) = m.swapped_positions();
                for p in &mut self.placement {
                    if *p == x {
                        *p = y;
                    } else if *p == y {
                        *p = x;
                    }
                }
            }
        }
    }
}

/// Routing primitives searched by [`bfs_route`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Exc,
    ExcInv,
    SwapQ1Q2,
    SwapQ2Q3,
    SwapQ1Q3,
}

impl Move {
    pub const ALL: [Move; 5] = [
        Move::Exc,
        Move::ExcInv,
        Move::SwapQ1Q2,
        Move::SwapQ2Q3,
        Move::SwapQ1Q3,
    ];

    fn swapped_positions(self) -> (usize, usize) {
        match self {
            Move::SwapQ1Q2 => (0, 1),
            Move::SwapQ2Q3 => (1, 2),
            Move::SwapQ1Q3 => (0, 2),
            _ => unreachable!(),
        }
    }

    fn apply_to(self, pos: usize, phase: PhaseLabel, n: usize) -> (usize, PhaseLabel) {
        match self {
            Move::Exc => (step(pos, phase, n), phase.flipped()),
            Move::ExcInv => (step(pos, phase.flipped(), n), phase.flipped()),
            _ => {
                let (x, y) = self.swapped_positions();
                let p = if pos == x {
                    y
                } else if pos == y {
                    x
                } else {
                    pos
                };
                (p, phase)
            }
        }
    }
}

/// Shortest move sequence placing logical qubits `a`, `b`, `c` (1-based) on
/// `Q_1`, `Q_3`, `Q_2` respectively.
pub fn bfs_route(a: usize, b: usize, c: usize, routing: &RoutingState) -> Vec<Move> {
    assert!(a != b && b != c && a != c, "targets must be distinct");
    let n = routing.n();
    type Key = (usize, usize, usize, PhaseLabel);
    let start: Key = (
        routing.position(a),
        routing.position(b),
        routing.position(c),
        routing.phase,
    );
    let done = |k: &Key| k.0 == 0 && k.1 == 2 && k.2 == Q2;
    let mut parent: HashMap<Key, (Key, Move)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut goal = None;
    let mut seen = std::collections::HashSet::from([start]);
    while let Some(k) = queue.pop_front() {
        if done(&k) {
            goal = Some(k);
            break;
        }
        for m in Move::ALL {
            let (pa, ph) = m.apply_to(k.0, k.3, n);
            let (pb, _) = m.apply_to(k.1, k.3, n);
            let (pc, _) = m.apply_to(k.2, k.3, n);
            let next = (pa, pb, pc, ph);
            if seen.insert(next) {
                parent.insert(next, (k, m));
                queue.push_back(next);
            }
        }
    }
    let mut k = goal.expect("state space is connected");
    let mut moves = Vec::new();
    while let Some(&(prev, m)) = parent.get(&k) {
        moves.push(m);
        k = prev;
    }
    moves.reverse();
    moves
}

/// Accumulates pulses while tracking placement and phase.
struct Emitter {
    routing: RoutingState,
    out: PulseSchedule,
}

impl Emitter {
    fn new(routing: RoutingState) -> Self {
        Emitter {
            routing,
            out: PulseSchedule::new(),
        }
    }

    fn emit(&mut self, name: &str, s: &PulseSchedule) {
        self.out.append_macro(name, s);
        self.routing.pulse_count += s.len();
    }

    fn exc(&mut self) {
        self.emit("EXC", &seq_exchange());
        self.routing.apply_move(Move::Exc);
    }

    fn exc_inv(&mut self) {
        self.emit("EXC_INV", &seq_exchange_inverse());
        self.routing.apply_move(Move::ExcInv);
    }

    fn single(&mut self, q: usize, theta: f64, axis: Axis) -> Result<()> {
        let ell = route_to_q2(
            self.routing.position(q) + 1,
            self.routing.phase,
            self.routing.n(),
        );
        for _ in 0..ell {
            self.exc();
        }
        debug_assert_eq!(self.routing.position(q), Q2);
        self.emit("U_Q2", &seq_single_qubit_at_q2(theta, axis)?);
        for _ in 0..ell {
            self.exc_inv();
        }
        Ok(())
    }

    fn x(&mut self, q: usize) -> Result<()> {
        self.single(q, PI, Axis::X)
    }

    fn h(&mut self, q: usize) -> Result<()> {
        self.single(q, PI, Axis::HADAMARD)
    }

    fn toffoli_fixed(&mut self) {
        self.emit("TOFFOLI", &seq_toffoli());
    }

    /// CNOT from the occupant of `ctrl_pos` (0 or 2) onto the occupant of `Q_2`,
    /// using the other outer position as the spare.
    fn cnot_fixed(&mut self, ctrl_pos: usize) -> Result<()> {
        let spare = self.routing.occupant(2 - ctrl_pos);
        self.x(spare)?;
        self.toffoli_fixed();
        self.x(spare)?;
        self.toffoli_fixed();
        Ok(())
    }

    /// Physical swap of the states at `outer` (0 or 2) and `Q_2`.
    fn swap_fixed_with_q2(&mut self, outer: usize) -> Result<()> {
        self.cnot_fixed(outer)?;
        let (qa, qc) = (self.routing.occupant(outer), self.routing.occupant(Q2));
        self.h(qa)?;
        self.h(qc)?;
        self.cnot_fixed(outer)?;
        self.h(qa)?;
        self.h(qc)?;
        self.cnot_fixed(outer)
    }

    fn apply_move(&mut self, m: Move) -> Result<()> {
        match m {
            Move::Exc => self.exc(),
            Move::ExcInv => self.exc_inv(),
            Move::SwapQ1Q2 => self.swap_fixed_with_q2(0)?,
            Move::SwapQ2Q3 => self.swap_fixed_with_q2(2)?,
            Move::SwapQ1Q3 => {
                self.swap_fixed_with_q2(0)?;
                self.swap_fixed_with_q2(2)?;
                self.swap_fixed_with_q2(0)?;
            }
        }
        if matches!(m, Move::SwapQ1Q2 | Move::SwapQ2Q3 | Move::SwapQ1Q3) {
            self.routing.apply_move(m);
        }
        Ok(())
    }

    fn route(&mut self, a: usize, b: usize, c: usize) -> Result<()> {
        for m in bfs_route(a, b, c, &self.routing) {
            self.apply_move(m)?;
        }
        Ok(())
    }

    fn spare(&self, a: usize, c: usize) -> usize {
        (1..=self.routing.n())
            .find(|&q| q != a && q != c)
            .expect("N >= 3")
    }

    fn cnot(&mut self, a: usize, c: usize) -> Result<()> {
        let b = self.spare(a, c);
        self.route(a, b, c)?;
        self.cnot_fixed(0)
    }

    fn toffoli(&mut self, a: usize, b: usize, c: usize) -> Result<()> {
        self.route(a, b, c)?;
        self.toffoli_fixed();
        Ok(())
    }

    fn swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.cnot(a, b)?;
        self.h(a)?;
        self.h(b)?;
        self.cnot(a, b)?;
        self.h(a)?;
        self.h(b)?;
        self.cnot(a, b)
    }

    fn gate(&mut self, g: &LogicalGate) -> Result<()> {
        match *g {
            LogicalGate::R { q, theta, axis } => self.single(q, theta, axis),
            LogicalGate::X { q } => self.x(q),
            LogicalGate::Z { q } => self.single(q, PI, Axis::Z),
            LogicalGate::H { q } => self.h(q),
            LogicalGate::Cnot { a, b } => self.cnot(a, b),
            LogicalGate::Cz { a, b } => {
                self.h(b)?;
                self.cnot(a, b)?;
                self.h(b)
            }
            LogicalGate::Swap { a, b } => self.swap(a, b),
            LogicalGate::Toffoli { a, b, c } => self.toffoli(a, b, c),
        }
    }

    fn finish(self, routing: &mut RoutingState) -> PulseSchedule {
        *routing = self.routing;
        self.out
    }
}

fn check_qubits(routing: &RoutingState, qs: &[usize]) -> Result<()> {
    for (i, &q) in qs.iter().enumerate() {
        if q == 0 || q > routing.n() || qs[..i].contains(&q) {
            return Err(Error::InvalidGate(format!(
                "operands {qs:?} must be distinct and within 1..={}",
                routing.n()
            )));
        }
    }
    Ok(())
}

/// `Pi_exc^ell`, `W_{B^x}(theta, n)`, then `ell` inverse exchanges.
pub fn macro_single_qubit(
    q: usize,
    theta: f64,
    axis: Axis,
    routing: &mut RoutingState,
) -> Result<PulseSchedule> {
    check_qubits(routing, &[q])?;
    let mut e = Emitter::new(routing.clone());
    e.single(q, theta, axis)?;
    Ok(e.finish(routing))
}

/// CNOT with control `a`, target `c`.
pub fn macro_cnot(a: usize, c: usize, routing: &mut RoutingState) -> Result<PulseSchedule> {
    check_qubits(routing, &[a, c])?;
    let mut e = Emitter::new(routing.clone());
    e.cnot(a, c)?;
    Ok(e.finish(routing))
}

pub fn macro_swap(a: usize, b: usize, routing: &mut RoutingState) -> Result<PulseSchedule> {
    check_qubits(routing, &[a, b])?;
    let mut e = Emitter::new(routing.clone());
    e.swap(a, b)?;
    Ok(e.finish(routing))
}

/// `swap(a, b) = swap(a, c) swap(b, c) swap(a, c)`.
pub fn macro_swap_via(
    a: usize,
    b: usize,
    c: usize,
    routing: &mut RoutingState,
) -> Result<PulseSchedule> {
    check_qubits(routing, &[a, b, c])?;
    let mut e = Emitter::new(routing.clone());
    e.swap(a, c)?;
    e.swap(b, c)?;
    e.swap(a, c)?;
    Ok(e.finish(routing))
}

/// Controls `a`, `b`; target `c`.
pub fn macro_toffoli(
    a: usize,
    b: usize,
    c: usize,
    routing: &mut RoutingState,
) -> Result<PulseSchedule> {
    check_qubits(routing, &[a, b, c])?;
    let mut e = Emitter::new(routing.clone());
    e.toffoli(a, b, c)?;
    Ok(e.finish(routing))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    pub schedule: PulseSchedule,
    pub initial_phase: PhaseLabel,
    pub routing: RoutingState,
}

impl Compiled {
    pub fn final_placement(&self) -> &[usize] {
        &self.routing.placement
    }

    pub fn final_phase(&self) -> PhaseLabel {
        self.routing.phase
    }

    pub fn pulse_count(&self) -> usize {
        self.schedule.len()
    }

    /// Schedule text followed by the placement (1-based positions) and pulse-count trailer.
    pub fn to_text(&self) -> String {
        let placement: Vec<String> = self
            .final_placement()
            .iter()
            .map(|p| (p + 1).to_string())
            .collect();
        format!(
            "{}# final_placement: {}\n# pulses: {}\n",
            self.schedule.to_text(),
            placement.join(" "),
            self.pulse_count()
        )
    }
}

/// Reads the `# final_placement:` trailer (converted to 0-based positions).
pub fn parse_placement_trailer(text: &str) -> Option<Vec<usize>> {
    let line = text
        .lines()
        .find_map(|l| l.trim().strip_prefix("# final_placement:"))?;
    line.split_whitespace()
        .map(|w| w.parse::<usize>().ok().and_then(|p| p.checked_sub(1)))
        .collect()
}

pub fn compile(circuit: &LogicalCircuit, topo: &DeviceTopology) -> Result<Compiled> {
    compile_from(circuit, topo, PhaseLabel::FP)
}

/// Compiles starting from identity placement in `phase`.
pub fn compile_from(
    circuit: &LogicalCircuit,
    topo: &DeviceTopology,
    phase: PhaseLabel,
) -> Result<Compiled> {
    if topo.design().is_variant() {
        return Err(Error::BaselineRequired);
    }
    if circuit.n() != topo.n_logical() {
        return Err(Error::DimensionMismatch {
            expected: topo.n_logical(),
            actual: circuit.n(),
        });
    }
    let mut e = Emitter::new(RoutingState::identity(circuit.n(), phase));
    for g in circuit.gates() {
        g.validate(circuit.n())?;
        e.gate(g)?;
    }
    Ok(Compiled {
        schedule: e.out,
        initial_phase: phase,
        routing: e.routing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_examples() {
        // positions read (k2,k1,k4,k3,k6,k5): origin o lands where
        let fp = permutation_after(1, PhaseLabel::FP, 6);
        assert_eq!(fp, vec![1, 0, 3, 2, 5, 4]);
        let pf = permutation_after(1, PhaseLabel::PF, 6);
        let mut read = vec![0; 6];
        for (o, &p) in pf.iter().enumerate() {
            read[p] = o + 1;
        }
        assert_eq!(read, vec![6, 3, 2, 5, 4, 1]);
        assert_eq!(
            permutation_after(6, PhaseLabel::FP, 6),
            (0..6).collect::<Vec<_>>()
        );
    }

    #[test]
    fn route_examples() {
        assert_eq!(route_to_q2(2, PhaseLabel::FP, 4), 0);
        assert_eq!(route_to_q2(2, PhaseLabel::PF, 4), 0);
        assert_eq!(route_to_q2(1, PhaseLabel::FP, 4), 1);
        assert_eq!(route_to_q2(4, PhaseLabel::FP, 4), 2);
    }

    #[test]
    fn bfs_trivial_cases() {
        let r = RoutingState::identity(4, PhaseLabel::FP);
        assert!(bfs_route(1, 3, 2, &r).is_empty());
        assert_eq!(bfs_route(3, 1, 2, &r), vec![Move::SwapQ1Q3]);
    }

    #[test]
    fn single_qubit_at_q2_is_one_pulse() {
        let mut r = RoutingState::identity(4, PhaseLabel::FP);
        let s = macro_single_qubit(2, 0.3, Axis::Y, &mut r).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            r,
            RoutingState {
                pulse_count: 1,
                ..RoutingState::identity(4, PhaseLabel::FP)
            }
        );
    }

    #[test]
    fn toffoli_in_place_is_the_raw_sequence() {
        let mut r = RoutingState::identity(4, PhaseLabel::FP);
        let s = macro_toffoli(1, 3, 2, &mut r).unwrap();
        assert_eq!(s.pulses(), seq_toffoli().pulses());
    }

    #[test]
    fn trailer_round_trip() {
        let t = DeviceTopology::build_conveyor(4).unwrap();
        let c = LogicalCircuit::parse(4, "CNOT a=4 b=1\n").unwrap();
        let compiled = compile(&c, &t).unwrap();
        let text = compiled.to_text();
        assert_eq!(
            parse_placement_trailer(&text).unwrap(),
            compiled.final_placement()
        );
        assert!(text.ends_with(&format!("# pulses: {}\n", compiled.pulse_count())));
        assert_eq!(
            PulseSchedule::parse(&text).unwrap().pulses(),
            compiled.schedule.pulses()
        );
    }

    #[test]
    fn variants_rejected() {
        let v = DeviceTopology::build_variant(crate::topology::Design::TwoCouplerDoubleCrossed, 8)
            .unwrap();
        assert_eq!(
            compile(&LogicalCircuit::empty(8), &v),
            Err(Error::BaselineRequired)
        );
    }
}
