mod common;

use common::*;
use mrem::circuit::lower;
use mrem::pauli::expectation;
use mrem::sim::{
    amplitude_damping_kraus, apply_channel, dephasing_kraus, depolarizing_kraus, energy_with_shots, run_noisy,
    run_pure, shot_normal,
};
use mrem::{Circuit, GateKind, GateOp, NoiseModel, PauliSum64, ShotModel, State64};
use rand::Rng;

fn random_circuit(r: &mut impl Rng, n: usize, len: usize) -> Circuit {
    Circuit::from_ops(n, (0..len).map(|_| random_op(r, n))).unwrap()
}

#[test]
fn statevector_matches_dense_chain() {
    let mut r = rng(10);
    for _ in 0..100 {
        let n = r.random_range(1..=4usize);
        let len = r.random_range(0..=30usize);
        let circ = random_circuit(&mut r, n, len);
        let init = r.random_range(0..1usize << n);
        let state: State64 = run_pure(&circ, init as u64).unwrap();
        let oracle = chain_unitary(circ.ops(), n) * basis_vector(n, init);
        let amps = state.amplitudes().unwrap();
        let dev = amps
            .iter()
            .zip(oracle.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12, "deviation {dev}");
    }
}

#[test]
fn trivial_runs() {
    let s: State64 = run_pure(&Circuit::new(5), 0b00001).unwrap();
    assert_eq!(s.probability(0b00001), 1.0);
    let c = Circuit::from_ops(3, [GateOp::x(0)]).unwrap();
    let s: State64 = run_pure(&c, 0).unwrap();
    assert_eq!(s.probability(0b001), 1.0);
}

#[test]
fn unbound_circuit_is_a_contract_error() {
    let c = Circuit::from_ops(1, [GateOp::ry(0, mrem::Angle::param(0))]).unwrap();
    assert!(matches!(
        run_pure::<f64>(&c, 0),
        Err(mrem::Error::UnboundParameter { .. }) | Err(mrem::Error::Contract(_))
    ));
}

#[test]
fn zero_noise_equals_pure_projector() {
    let mut r = rng(11);
    for _ in 0..20 {
        let circ = random_circuit(&mut r, 3, 15);
        let pure: State64 = run_pure(&circ, 0).unwrap();
        let mixed: State64 = run_noisy(&circ, 0, &NoiseModel::noiseless()).unwrap();
        assert!(mixed.max_density_deviation(&pure.to_mixed().unwrap()) < 1e-12);
    }
}

#[test]
fn noisy_runs_stay_physical() {
    let mut r = rng(12);
    for _ in 0..10 {
        let circ = random_circuit(&mut r, 3, 20);
        let rho: State64 = run_noisy(&circ, 0, &NoiseModel::default()).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        let m = rho.density_matrix();
        assert!((&m - m.adjoint()).camax() < 1e-12);
        assert!(hermitian_spectrum(&m)[0] > -1e-8);
    }
}

#[test]
fn kraus_sets_are_trace_preserving() {
    let mut sets = vec![
        amplitude_damping_kraus::<f64>(0.3),
        dephasing_kraus::<f64>(0.2),
        depolarizing_kraus::<f64>(1, 0.4),
        depolarizing_kraus::<f64>(2, 0.1),
    ];
    sets.push(amplitude_damping_kraus::<f64>(1.0));
    for ks in sets {
        let d = ks[0].nrows();
        let sum = ks.iter().fold(Mat::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        assert!((sum - Mat::identity(d, d)).camax() < 1e-12);
    }
}

#[test]
fn full_depolarizing_gives_maximally_mixed_state() {
    let c = Circuit::from_ops(1, [GateOp::x(0)]).unwrap();
    let nm = NoiseModel {
        t1: None,
        t2: None,
        ..NoiseModel::depolarizing(1.0, 0.0)
    };
    let rho: State64 = run_noisy(&c, 0, &nm).unwrap();
    let z: PauliSum64 = PauliSum64::from_labels(&[(1.0, "Z")]).unwrap();
    assert!(expectation(&z, &rho).unwrap().abs() < 1e-12);
    assert!((rho.purity() - 0.5).abs() < 1e-12);
}

#[test]
fn amplitude_damping_closed_form() {
    // |1> under gamma relaxes to <Z> = 1 - 2 (1 - gamma)
    for dur_over_t1 in [0.01, 0.5, 2.0] {
        let gamma = 1.0 - f64::exp(-dur_over_t1);
        let mut rho: State64 = State64::basis(1, 1).unwrap().to_mixed().unwrap();
        apply_channel(&mut rho, &[0], &amplitude_damping_kraus(gamma)).unwrap();
        let z = PauliSum64::from_labels(&[(1.0, "Z")]).unwrap();
        let expected = 1.0 - 2.0 * f64::exp(-dur_over_t1);
        assert!((expectation(&z, &rho).unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn relaxation_in_the_gate_model_matches_formula() {
    // One X gate on |0> with only T1: population of |1> is exp(-dur/T1).
    let nm = NoiseModel {
        depol_1q: 0.0,
        depol_2q: 0.0,
        t1: Some(100.0),
        t2: Some(200.0),
        dur_1q: 30.0,
        ..NoiseModel::default()
    };
    let c = Circuit::from_ops(1, [GateOp::x(0)]).unwrap();
    let rho: State64 = run_noisy(&c, 0, &nm).unwrap();
    assert!((rho.probability(1) - f64::exp(-0.3)).abs() < 1e-12);
}

#[test]
fn coherence_decays_with_t2() {
    let nm = NoiseModel {
        depol_1q: 0.0,
        depol_2q: 0.0,
        t1: Some(100.0),
        t2: Some(80.0),
        dur_1q: 10.0,
        ..NoiseModel::default()
    };
    let c = Circuit::from_ops(1, [GateOp::h(0)]).unwrap();
    let rho: State64 = run_noisy(&c, 0, &nm).unwrap();
    // off-diagonal 1/2 e^{-t/T2}
    assert!((rho.density_entry(0, 1).re - 0.5 * f64::exp(-10.0 / 80.0)).abs() < 1e-12);
}

fn register_wide_circuit(r: &mut impl Rng, n: usize, len: usize) -> Circuit {
    // every gate spans the whole register, so each noise step is global
    let ops = (0..len).map(|_| loop {
        let op = random_op(r, n);
        if op.qubits().len() == n && matches!(op.kind(), GateKind::X | GateKind::H | GateKind::RY | GateKind::CX) {
            break op;
        }
    });
    Circuit::from_ops(n, ops).unwrap()
}

#[test]
fn depolarizing_contracts_toward_identity() {
    let mut r = rng(13);
    let nm = NoiseModel {
        t1: None,
        t2: None,
        ..NoiseModel::depolarizing(0.02, 0.05)
    };
    for n in [1, 2] {
        for _ in 0..30 {
            let circ = register_wide_circuit(&mut r, n, 8);
            let h = random_hamiltonian(&mut r, n, 6);
            let center = h.trace_per_dim().re;
            let pure: State64 = run_pure(&circ, 0).unwrap();
            let noisy: State64 = run_noisy(&circ, 0, &nm).unwrap();
            let ep = expectation(&h, &pure).unwrap();
            let en = expectation(&h, &noisy).unwrap();
            assert!((en - center).abs() <= (ep - center).abs() + 1e-12);
        }
    }
}

#[test]
fn local_depolarizing_contracts_in_hilbert_schmidt_norm() {
    // Local channels do not shrink every expectation value, but as unital
    // maps they never move the state away from I/d.
    let mut r = rng(15);
    let nm = NoiseModel {
        t1: None,
        t2: None,
        ..NoiseModel::depolarizing(0.02, 0.05)
    };
    for _ in 0..30 {
        let circ = random_circuit(&mut r, 3, 12);
        let pure: State64 = run_pure(&circ, 0).unwrap();
        let noisy: State64 = run_noisy(&circ, 0, &nm).unwrap();
        assert!(noisy.purity() <= pure.purity() + 1e-12);
    }
}

#[test]
fn noise_is_applied_to_lowered_gates() {
    // A composite gate is as noisy as its decomposition.
    let g = Circuit::from_ops(2, [GateOp::x(0), GateOp::g(1, 0, mrem::Angle::Bound(0.7))]).unwrap();
    let a: State64 = run_noisy(&g, 0, &NoiseModel::default()).unwrap();
    let b: State64 = run_noisy(&lower(&g).unwrap(), 0, &NoiseModel::default()).unwrap();
    assert!(a.max_density_deviation(&b) < 1e-14);
}

#[test]
fn shot_noise_examples() {
    let x = PauliSum64::from_labels(&[(1.0, "X")]).unwrap();
    let zero = State64::basis(1, 0).unwrap();
    let sm = ShotModel::with_shots(10_000);
    let e = energy_with_shots(&x, &zero, &sm, 42, 7).unwrap();
    assert_eq!(e, shot_normal(42, 7) / 100.0);
    assert_eq!(energy_with_shots(&x, &zero, &sm, 42, 7).unwrap(), e);
    assert_eq!(energy_with_shots(&x, &zero, &ShotModel::off(), 42, 7).unwrap(), 0.0);
    // eigenstate: zero variance
    let z = PauliSum64::from_labels(&[(-0.7, "Z")]).unwrap();
    assert_eq!(
        energy_with_shots(&z, &zero, &ShotModel::with_shots(1), 1, 1).unwrap(),
        -0.7
    );
}

#[test]
fn shot_mean_converges() {
    let mut r = rng(14);
    let h = random_hamiltonian(&mut r, 2, 5);
    let psi = State64::from_amplitudes(2, random_state(&mut r, 2)).unwrap();
    let e = expectation(&h, &psi).unwrap();
    let h2 = h.checked_mul(&h).unwrap();
    let sigma = (expectation(&h2, &psi).unwrap() - e * e).sqrt();
    let shots = 100u64;
    let sm = ShotModel::with_shots(shots);
    let mean: f64 = (0..1000)
        .map(|k| energy_with_shots(&h, &psi, &sm, 99, k).unwrap())
        .sum::<f64>()
        / 1000.0;
    assert!((mean - e).abs() < 4.0 * sigma / ((1000 * shots) as f64).sqrt());
}
