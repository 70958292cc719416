mod common;

use common::*;
use mrem::circuit::{build_ry_linear, compose_init_after_ansatz, count_resources, decompose, gate_unitary, lower};
use mrem::{Angle, Circuit, GateKind, GateOp};
use proptest::prelude::*;
use rand::Rng;

fn op_for(kind: GateKind, theta: f64) -> GateOp {
    let qubits: Vec<usize> = (0..kind.arity()).rev().collect();
    GateOp::new(kind, qubits, kind.takes_angle().then_some(Angle::Bound(theta))).unwrap()
}

#[test]
fn library_unitaries_match_textbook_matrices() {
    let mut r = rng(20);
    for kind in GateKind::ALL {
        for _ in 0..10 {
            let theta = r.random_range(-7.0..7.0);
            let lib = gate_unitary::<f64>(&op_for(kind, theta)).unwrap();
            assert!((lib - gate_matrix(kind, theta)).camax() < 1e-14, "{kind}");
        }
    }
}

#[test]
fn decompositions_match_direct_unitaries_up_to_phase() {
    let mut r = rng(21);
    for kind in [GateKind::CRY, GateKind::G, GateKind::CG, GateKind::G2, GateKind::CG2] {
        for _ in 0..50 {
            let theta = r.random_range(-7.0..7.0);
            let op = op_for(kind, theta);
            let n = kind.arity();
            let lowered = lower(&decompose(&op).unwrap()).unwrap();
            assert!(lowered
                .ops()
                .iter()
                .all(|o| matches!(o.kind(), GateKind::X | GateKind::H | GateKind::RY | GateKind::CX)));
            let chain = chain_unitary(lowered.ops(), n);
            let direct = embed(&gate_matrix(kind, theta), op.qubits(), n);
            assert!(phase_distance(&chain, &direct) < 1e-10, "{kind} at {theta}");
        }
    }
}

#[test]
fn decomposition_on_scattered_qubits() {
    let op = GateOp::cg2(4, [0, 5, 2, 1], Angle::Bound(0.9));
    let c = Circuit::from_ops(6, [op.clone()]).unwrap();
    let lowered = lower(&c).unwrap();
    let direct = op_matrix(&op, 6);
    assert!(phase_distance(&chain_unitary(lowered.ops(), 6), &direct) < 1e-10);
}

#[test]
fn gate_counts() {
    let counts = |kind| count_resources(&decompose(&op_for(kind, 0.4)).unwrap(), true);
    assert_eq!(counts(GateKind::G).n2, 2);
    assert_eq!(counts(GateKind::G2).n2, 14);
    assert_eq!((counts(GateKind::CRY).n1, counts(GateKind::CRY).n2), (2, 2));
    for (n, l, n1, n2) in [(5, 5, 30, 20), (8, 5, 48, 35), (8, 20, 168, 140)] {
        let c = count_resources(&build_ry_linear(n, l).unwrap(), true);
        assert_eq!((c.n1, c.n2), (n1, n2));
    }
    let undecomposed = Circuit::from_ops(4, [op_for(GateKind::G2, 0.1)]).unwrap();
    assert_eq!(count_resources(&undecomposed, false).n_multi, 1);
}

#[test]
fn symbolic_angles_survive_decomposition() {
    let op = GateOp::g2([3, 2, 1, 0], Angle::param(0));
    let c = Circuit::from_ops(4, [op]).unwrap();
    let lowered = lower(&c).unwrap();
    assert_eq!(lowered.n_params(), 1);
    for theta in [0.3, -1.7] {
        let a = chain_unitary(lowered.bind(&[theta]).unwrap().ops(), 4);
        let b = gate_matrix(GateKind::G2, theta);
        assert!(phase_distance(&a, &b) < 1e-10);
    }
}

#[test]
fn ansatz_structure() {
    let c = build_ry_linear(3, 2).unwrap();
    assert_eq!(c.n_params(), 9);
    assert!(build_ry_linear(1, 1).is_err());
    assert!(build_ry_linear(3, 0).is_err());
    // zero angles leave |0...0> alone
    let bound = c.bind(&[0.0; 9]).unwrap();
    let u = chain_unitary(bound.ops(), 3);
    assert!((u.column(0) - basis_vector(3, 0)).camax() < 1e-14);
}

#[test]
fn init_runs_after_ansatz() {
    let ansatz = Circuit::from_ops(2, [GateOp::ry(0, Angle::param(0))]).unwrap();
    let init = Circuit::from_ops(2, [GateOp::cx(0, 1)]).unwrap();
    let c = compose_init_after_ansatz(&ansatz, &init).unwrap();
    assert_eq!(c.ops()[0].kind(), GateKind::RY);
    assert_eq!(c.ops()[1].kind(), GateKind::CX);
}

#[test]
fn invalid_ops_are_rejected() {
    assert!(GateOp::new(GateKind::CX, vec![1, 1], None).is_err());
    assert!(GateOp::new(GateKind::RY, vec![0], None).is_err());
    assert!(GateOp::new(GateKind::X, vec![0], Some(Angle::Bound(1.0))).is_err());
    let mut c = Circuit::new(2);
    assert!(c.push(GateOp::x(2)).is_err());
}

#[test]
fn json_round_trip() {
    let c = Circuit::from_ops(
        4,
        [
            GateOp::x(0),
            GateOp::g2([3, 2, 1, 0], Angle::scaled_param(1, -1, 8)),
            GateOp::ry(2, Angle::Bound(0.25)),
        ],
    )
    .unwrap();
    let back = Circuit::from_json(&c.to_json()).unwrap();
    assert_eq!(back, c);
    assert!(Circuit::from_json(r#"{"n_qubits": 2, "ops": [{"kind": "CX", "qubits": [0, 2]}]}"#).is_err());
    assert!(Circuit::from_json(r#"{"n_qubits": 2, "ops": [{"kind": "Q", "qubits": [0]}]}"#).is_err());
}

proptest! {
    #[test]
    fn rational_multipliers_bind_exactly(num in -8i64..8, den in 1i64..9, theta in -3.0f64..3.0) {
        let c = Circuit::from_ops(1, [GateOp::ry(0, Angle::scaled_param(0, num, den))]).unwrap();
        let bound = c.bind(&[theta]).unwrap();
        let v = bound.ops()[0].angle().unwrap().value().unwrap();
        prop_assert!((v - theta * num as f64 / den as f64).abs() < 1e-15);
    }

    #[test]
    fn lowering_preserves_unitary(seed in 0u64..1000) {
        let mut r = rng(seed);
        let ops: Vec<GateOp> = (0..6).map(|_| random_op(&mut r, 4)).collect();
        let c = Circuit::from_ops(4, ops).unwrap();
        let lowered = lower(&c).unwrap();
        prop_assert!(phase_distance(&chain_unitary(lowered.ops(), 4), &chain_unitary(c.ops(), 4)) < 1e-10);
    }
}
