mod common;

use common::{expected_after_prefix, minus_i_pow};
use conveyor_core::compiler::permutation_after;
use conveyor_core::oracle::{compare_up_to_global_phase, simulate_logical};
use conveyor_core::pulses::{
    apply_global_pulse, apply_schedule, seq_ccz_axis, seq_exchange, seq_exchange_inverse, seq_init,
    seq_toffoli,
};
use conveyor_core::state::inner;
use conveyor_core::{
    decode_well_formed, encode_sparse, encode_well_formed, fidelity, Axis, DeviceTopology,
    GlobalPulse, LogicalCircuit, LogicalGate, LogicalStateVector, PhaseLabel, PulseSchedule,
    PureState, QuantumState, TargetClass, C64,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn topo(n: usize) -> DeviceTopology {
    DeviceTopology::build_conveyor(n).unwrap()
}

fn random_axis(rng: &mut ChaCha8Rng) -> Axis {
    Axis::normalized(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
    .unwrap()
}

#[test]
fn exchange_prefixes_follow_branch_tables() {
    let t = topo(4);
    let exc = seq_exchange();
    for phase in [PhaseLabel::FP, PhaseLabel::PF] {
        for k in 0..16 {
            let mut s = encode_well_formed(&LogicalStateVector::basis(4, k), phase, &t).unwrap();
            for m in 0..=8 {
                if m > 0 {
                    apply_global_pulse(&mut s, &t, &exc.pulses()[m - 1]).unwrap();
                }
                let (idx, amp) = expected_after_prefix(&t, k, phase, m);
                assert!(
                    (s.amplitude(idx) - amp).norm() < 1e-12,
                    "phase {phase} k={k:04b} prefix {m}: got {} want {amp}",
                    s.amplitude(idx)
                );
                assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn paramagnetic_sector_returns_ferromagnetic_with_minus_i_to_the_seventh() {
    let t = topo(4);
    let mut s = encode_well_formed(&LogicalStateVector::basis(4, 0), PhaseLabel::FP, &t).unwrap();
    apply_schedule(&mut s, &t, &seq_exchange()).unwrap();
    let mut support = Vec::new();
    s.for_each_amplitude(&mut |i, a| {
        if a.norm() > 1e-12 {
            support.push((i, a));
        }
    });
    assert_eq!(support.len(), 1);
    let (idx, amp) = support[0];
    // Compounds (gg branch) carry (-i)^11 each, the two P sectors (-i)^7 each.
    assert!((amp - minus_i_pow(11 + 11 + 7 + 7)).norm() < 1e-12);
    for sector in [&t.sectors()[1], &t.sectors()[3]] {
        for site in sector.sites() {
            assert_eq!(idx >> site & 1, 0, "P sector site {site} not ground");
        }
    }
}

#[test]
fn ccz_marks_only_the_all_ground_branch() {
    let t = topo(4);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut axes = vec![Axis::X];
    axes.extend((0..5).map(|_| random_axis(&mut rng)));
    for axis in axes {
        for phase in [PhaseLabel::FP, PhaseLabel::PF] {
            for k in 0..16 {
                let input =
                    encode_well_formed(&LogicalStateVector::basis(4, k), phase, &t).unwrap();
                let mut s = input.clone();
                apply_schedule(&mut s, &t, &seq_ccz_axis(axis)).unwrap();
                let sign = if k & 0b111 == 0 { -1.0 } else { 1.0 };
                let ov = inner(&input, &s).unwrap();
                assert!(
                    (ov - C64::new(sign, 0.0)).norm() < 1e-12,
                    "k={k:04b} axis {axis}"
                );
            }
        }
    }
}

#[test]
fn toffoli_truth_table_with_common_phase() {
    let t = topo(4);
    let tof = LogicalCircuit::new(4, vec![LogicalGate::Toffoli { a: 1, b: 3, c: 2 }]).unwrap();
    for phase in [PhaseLabel::FP, PhaseLabel::PF] {
        let mut phases = Vec::new();
        for k in 0..16 {
            let psi = LogicalStateVector::basis(4, k);
            let mut s = encode_well_formed(&psi, phase, &t).unwrap();
            apply_schedule(&mut s, &t, &seq_toffoli()).unwrap();
            let want =
                encode_well_formed(&simulate_logical(&tof, &psi).unwrap(), phase, &t).unwrap();
            let ov = inner(&want, &s).unwrap();
            assert!((ov.norm() - 1.0).abs() < 1e-12, "k={k:04b}");
            phases.push(ov);
        }
        for p in &phases {
            assert!((p - phases[0]).norm() < 1e-12);
        }
    }
}

#[test]
fn toffoli_is_linear_on_superpositions() {
    let t = topo(4);
    let tof = LogicalCircuit::new(4, vec![LogicalGate::Toffoli { a: 1, b: 3, c: 2 }]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let psi = LogicalStateVector::random(4, &mut rng);
        let mut s = encode_well_formed(&psi, PhaseLabel::FP, &t).unwrap();
        apply_schedule(&mut s, &t, &seq_toffoli()).unwrap();
        let d = decode_well_formed(&s, &t).unwrap();
        let (f, _) =
            compare_up_to_global_phase(&simulate_logical(&tof, &psi).unwrap(), &d.logical).unwrap();
        assert!(f >= 1.0 - 1e-10);
        assert_eq!(d.phase, PhaseLabel::FP);
    }
}

fn check_concatenation<S: QuantumState>(
    n: usize,
    mut s: S,
    psi: &LogicalStateVector,
    start: PhaseLabel,
) {
    let t = topo(n);
    for ell in 1..=n {
        apply_schedule(&mut s, &t, &seq_exchange()).unwrap();
        let d = decode_well_formed(&s, &t).unwrap();
        assert!(d.residual < 1e-10);
        assert_eq!(d.phase, start.flipped_n(ell));
        let want = psi.permuted(&permutation_after(ell, start, n));
        let (f, _) = compare_up_to_global_phase(&want, &d.logical).unwrap();
        assert!(f >= 1.0 - 1e-10, "N={n} ell={ell} f={f}");
    }
}

#[test]
fn exchange_concatenation_rotates_placements() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for start in [PhaseLabel::FP, PhaseLabel::PF] {
        let psi = LogicalStateVector::random(4, &mut rng);
        check_concatenation(
            4,
            encode_well_formed(&psi, start, &topo(4)).unwrap(),
            &psi,
            start,
        );
        let psi = LogicalStateVector::random(6, &mut rng);
        check_concatenation(
            6,
            encode_sparse(&psi, start, &topo(6)).unwrap(),
            &psi,
            start,
        );
    }
}

#[test]
fn exchange_inverse_undoes_exchange_and_matches_n_minus_one_exchanges() {
    let t = topo(4);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for phase in [PhaseLabel::FP, PhaseLabel::PF] {
        let psi = LogicalStateVector::random(4, &mut rng);
        let input = encode_well_formed(&psi, phase, &t).unwrap();
        let mut s = input.clone();
        apply_schedule(&mut s, &t, &seq_exchange()).unwrap();
        apply_schedule(&mut s, &t, &seq_exchange_inverse()).unwrap();
        assert!(fidelity(&input, &s).unwrap() >= 1.0 - 1e-10);

        let mut a = input.clone();
        apply_schedule(&mut a, &t, &seq_exchange_inverse()).unwrap();
        let mut b = input.clone();
        apply_schedule(&mut b, &t, &seq_exchange().repeated(3)).unwrap();
        assert!(fidelity(&a, &b).unwrap() >= 1.0 - 1e-10);
    }
}

#[test]
fn per_site_order_does_not_matter() {
    let t = topo(4);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for class in [
        TargetClass::ARegular,
        TargetClass::BAll,
        TargetClass::ACrossed,
    ] {
        let theta = rng.random_range(-3.0..3.0);
        let axis = random_axis(&mut rng);
        let amps: Vec<C64> = (0..1 << 17)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let input =
            PureState::from_amplitudes(17, amps.into_iter().map(|a| a / norm).collect()).unwrap();
        let mut reference = input.clone();
        apply_global_pulse(
            &mut reference,
            &t,
            &GlobalPulse::new(class, theta, axis).unwrap(),
        )
        .unwrap();
        let mut sites = class.sites(&t);
        sites.shuffle(&mut rng);
        let mut s = input.clone();
        for site in sites {
            s.apply_controlled_rotation(site, t.neighbors(site).unwrap(), theta, &axis)
                .unwrap();
        }
        assert!(conveyor_core::state::l2_distance(&reference, &s).unwrap() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn schedule_followed_by_its_inverse_is_identity() {
    let t = topo(4);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut sched = PulseSchedule::new();
    for _ in 0..12 {
        let class = *[
            TargetClass::ARegular,
            TargetClass::BAll,
            TargetClass::BCrossed,
            TargetClass::ACrossed,
        ]
        .choose(&mut rng)
        .unwrap();
        sched.push(
            GlobalPulse::new(class, rng.random_range(-6.0..6.0), random_axis(&mut rng)).unwrap(),
        );
    }
    let psi = LogicalStateVector::random(4, &mut rng);
    let input = encode_well_formed(&psi, PhaseLabel::FP, &t).unwrap();
    let mut s = input.clone();
    apply_schedule(&mut s, &t, &sched).unwrap();
    assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    apply_schedule(&mut s, &t, &sched.inverse()).unwrap();
    assert!(conveyor_core::state::l2_distance(&input, &s).unwrap() < 1e-10);
}

#[test]
fn init_prepares_ground_logical_state() {
    let t = topo(4);
    let mut s = PureState::all_ground(17);
    apply_schedule(&mut s, &t, &seq_init()).unwrap();
    let d = decode_well_formed(&s, &t).unwrap();
    assert_eq!(d.phase, PhaseLabel::FP);
    assert!((d.logical.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    assert_eq!(s.support_size(), 1 << 17);
    let mut flipped = 0;
    s.for_each_amplitude(&mut |i, a| {
        if a.norm() > 0.5 {
            flipped = i.count_ones();
        }
    });
    assert_eq!(flipped, 2);
}
