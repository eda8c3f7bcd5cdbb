use conveyor_core::compiler::{
    bfs_route, compile, macro_cnot, macro_single_qubit, macro_swap, macro_swap_via, macro_toffoli,
    permutation_after, route_to_q2, Move, RoutingState,
};
use conveyor_core::pulses::{
    seq_exchange, seq_exchange_inverse, seq_single_qubit_at_q2, TargetClass,
};
use conveyor_core::verify::{verify_compiled, verify_schedule, Backend};
use conveyor_core::{
    Axis, DeviceTopology, LogicalCircuit, LogicalGate, LogicalStateVector, PhaseLabel,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn topo(n: usize) -> DeviceTopology {
    DeviceTopology::build_conveyor(n).unwrap()
}

fn single(n: usize, g: LogicalGate) -> LogicalCircuit {
    LogicalCircuit::new(n, vec![g]).unwrap()
}

fn all_kinds() -> Vec<LogicalGate> {
    vec![
        LogicalGate::R {
            q: 3,
            theta: 0.7,
            axis: Axis::normalized(0.2, -0.5, 0.8).unwrap(),
        },
        LogicalGate::X { q: 1 },
        LogicalGate::Z { q: 4 },
        LogicalGate::H { q: 2 },
        LogicalGate::Cnot { a: 4, b: 1 },
        LogicalGate::Cz { a: 2, b: 3 },
        LogicalGate::Swap { a: 1, b: 4 },
        LogicalGate::Toffoli { a: 2, b: 4, c: 1 },
    ]
}

#[test]
fn every_gate_kind_matches_oracle_on_random_inputs() {
    let t = topo(4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in all_kinds() {
        let c = single(4, g);
        let compiled = compile(&c, &t).unwrap();
        for _ in 0..20 {
            let psi = LogicalStateVector::random(4, &mut rng);
            let v = verify_compiled(&c, &compiled, &t, &psi, Backend::Sparse, true).unwrap();
            assert!(v.fidelity >= 1.0 - 1e-9, "{g}: fidelity {}", v.fidelity);
            assert!(v.max_boundary_residual < 1e-9);
        }
    }
}

#[test]
fn x_on_q3_emits_rotation_bracket() {
    let t = topo(4);
    let c = single(4, LogicalGate::X { q: 3 });
    let s = compile(&c, &t).unwrap().schedule;
    let ell = route_to_q2(3, PhaseLabel::FP, 4);
    assert_eq!(s.len(), 8 * ell + 1 + 10 * ell);
    let mut expect = seq_exchange().repeated(ell);
    expect.append(&seq_single_qubit_at_q2(std::f64::consts::PI, Axis::X).unwrap());
    expect.append(&seq_exchange_inverse().repeated(ell));
    assert_eq!(s.pulses(), expect.pulses());
    assert_eq!(s.pulses()[8 * ell].target, TargetClass::BCrossed);
}

#[test]
fn empty_circuit_compiles_to_nothing() {
    let c = compile(&LogicalCircuit::empty(4), &topo(4)).unwrap();
    assert!(c.schedule.is_empty());
    assert_eq!(c.final_placement(), &[0, 1, 2, 3]);
}

#[test]
fn single_qubit_macro_restores_routing() {
    for phase in [PhaseLabel::FP, PhaseLabel::PF] {
        for q in 1..=6 {
            let mut r = RoutingState::identity(6, phase);
            macro_single_qubit(q, 0.4, Axis::Y, &mut r).unwrap();
            assert_eq!(r.placement, (0..6).collect::<Vec<_>>());
            assert_eq!(r.phase, phase);
        }
    }
}

#[test]
fn opposite_rotations_cancel() {
    let t = topo(4);
    let mut r = RoutingState::identity(4, PhaseLabel::FP);
    let mut s = macro_single_qubit(1, 0.9, Axis::X, &mut r).unwrap();
    s.append(&macro_single_qubit(1, -0.9, Axis::X, &mut r).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let psi = LogicalStateVector::random(4, &mut rng);
    let v = verify_schedule(
        &LogicalCircuit::empty(4),
        &s,
        &r.placement,
        PhaseLabel::FP,
        &t,
        &psi,
        Backend::Sparse,
        false,
    )
    .unwrap();
    assert!(v.fidelity >= 1.0 - 1e-10);
}

#[test]
fn bfs_replay_lands_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [4usize, 6] {
        for _ in 0..50 {
            let mut placement: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            placement.shuffle(&mut rng);
            let phase = if rand::Rng::random::<bool>(&mut rng) {
                PhaseLabel::FP
            } else {
                PhaseLabel::PF
            };
            let r = RoutingState {
                placement: placement.clone(),
                phase,
                pulse_count: 0,
            };
            let mut qs: Vec<usize> = (1..=n).collect();
            qs.shuffle(&mut rng);
            let (a, b, c) = (qs[0], qs[1], qs[2]);
            let moves = bfs_route(a, b, c, &r);
            assert!(moves.len() <= 2 * n * (n - 1) * (n - 2));
            // replay on positions only
            let (mut pa, mut pb, mut pc, mut ph) =
                (placement[a - 1], placement[b - 1], placement[c - 1], phase);
            for m in moves {
                let f = |p: usize| match m {
                    Move::Exc => permutation_after(1, ph, n)[p],
                    Move::ExcInv => permutation_after(1, ph.flipped(), n)[p],
                    Move::SwapQ1Q2 => [1, 0].get(p).copied().unwrap_or(p),
                    Move::SwapQ2Q3 => match p {
                        1 => 2,
                        2 => 1,
                        x => x,
                    },
                    Move::SwapQ1Q3 => match p {
                        0 => 2,
                        2 => 0,
                        x => x,
                    },
                };
                pa = f(pa);
                pb = f(pb);
                pc = f(pc);
                if matches!(m, Move::Exc | Move::ExcInv) {
                    ph = ph.flipped();
                }
            }
            assert_eq!((pa, pb, pc), (0, 2, 1));
        }
    }
}

#[test]
fn cnot_truth_table() {
    let t = topo(4);
    let c = single(4, LogicalGate::Cnot { a: 1, b: 3 });
    let compiled = compile(&c, &t).unwrap();
    for k in [0b0000, 0b0001, 0b0100, 0b0101] {
        let psi = LogicalStateVector::basis(4, k);
        let v = verify_compiled(&c, &compiled, &t, &psi, Backend::Sparse, false).unwrap();
        assert!(v.fidelity >= 1.0 - 1e-9);
    }
}

#[test]
fn swap_via_third_matches_direct_swap() {
    let t = topo(4);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let circuit = single(4, LogicalGate::Swap { a: 2, b: 4 });
    for via in [1, 3] {
        let mut r = RoutingState::identity(4, PhaseLabel::FP);
        let s = macro_swap_via(2, 4, via, &mut r).unwrap();
        let mut r2 = RoutingState::identity(4, PhaseLabel::FP);
        let s2 = macro_swap(2, 4, &mut r2).unwrap();
        for _ in 0..5 {
            let psi = LogicalStateVector::random(4, &mut rng);
            for (sched, rr) in [(&s, &r), (&s2, &r2)] {
                let v = verify_schedule(
                    &circuit,
                    sched,
                    &rr.placement,
                    PhaseLabel::FP,
                    &t,
                    &psi,
                    Backend::Sparse,
                    false,
                )
                .unwrap();
                assert!(v.fidelity >= 1.0 - 1e-9);
            }
        }
    }
}

#[test]
fn toffoli_control_symmetry() {
    let t = topo(4);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let reference = single(4, LogicalGate::Toffoli { a: 2, b: 4, c: 1 });
    for (a, b) in [(2, 4), (4, 2)] {
        let mut r = RoutingState::identity(4, PhaseLabel::FP);
        let s = macro_toffoli(a, b, 1, &mut r).unwrap();
        for _ in 0..5 {
            let psi = LogicalStateVector::random(4, &mut rng);
            let v = verify_schedule(
                &reference,
                &s,
                &r.placement,
                PhaseLabel::FP,
                &t,
                &psi,
                Backend::Sparse,
                true,
            )
            .unwrap();
            assert!(v.fidelity >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn cnot_twice_is_identity() {
    let t = topo(4);
    let mut r = RoutingState::identity(4, PhaseLabel::FP);
    let mut s = macro_cnot(3, 2, &mut r).unwrap();
    s.append(&macro_cnot(3, 2, &mut r).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let psi = LogicalStateVector::random(4, &mut rng);
    let v = verify_schedule(
        &LogicalCircuit::empty(4),
        &s,
        &r.placement,
        PhaseLabel::FP,
        &t,
        &psi,
        Backend::Sparse,
        false,
    )
    .unwrap();
    assert!(v.fidelity >= 1.0 - 1e-9);
}
