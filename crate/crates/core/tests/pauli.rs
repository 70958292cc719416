mod common;

use common::*;
use mrem::pauli::{exact_ground_state, expectation, expectation_raw, parse_pauli_sum, to_dense};
use mrem::{PauliSum64, State64};
use proptest::prelude::*;

#[test]
fn dense_matches_kronecker_oracle() {
    let mut r = rng(1);
    for n in 1..=4 {
        for _ in 0..25 {
            let h = random_hamiltonian(&mut r, n, 6);
            let lib = to_dense(&h).unwrap();
            let oracle = sum_matrix(&h);
            assert!((lib - oracle).camax() < 1e-12);
        }
    }
}

#[test]
fn products_match_matrix_products() {
    let mut r = rng(2);
    for n in 1..=3 {
        for _ in 0..30 {
            let a = random_hamiltonian(&mut r, n, 4);
            let b = random_hamiltonian(&mut r, n, 4);
            let prod = a.checked_mul(&b).unwrap();
            let oracle = sum_matrix(&a) * sum_matrix(&b);
            assert!((sum_matrix(&prod) - oracle).camax() < 1e-12);
            let comm = a.commutator(&b).unwrap();
            let oracle = sum_matrix(&a) * sum_matrix(&b) - sum_matrix(&b) * sum_matrix(&a);
            assert!((sum_matrix(&comm) - oracle).camax() < 1e-12);
        }
    }
}

#[test]
fn expectation_matches_quadratic_form() {
    let mut r = rng(3);
    for n in 1..=4 {
        for _ in 0..50 {
            let h = random_hamiltonian(&mut r, n, 8);
            let psi = random_state(&mut r, n);
            let oracle = quadratic_form(&sum_matrix(&h), &psi);
            let state = State64::from_amplitudes(n, psi).unwrap();
            let e = expectation(&h, &state).unwrap();
            assert!((e - oracle.re).abs() < 1e-12);
            assert!(oracle.im.abs() < 1e-12);
        }
    }
}

#[test]
fn mixed_expectation_is_trace() {
    let mut r = rng(4);
    let h = random_hamiltonian(&mut r, 3, 10);
    let a = random_state(&mut r, 3);
    let b = random_state(&mut r, 3);
    let rho = {
        let va = nalgebra::DVector::from_column_slice(&a);
        let vb = nalgebra::DVector::from_column_slice(&b);
        (&va * va.adjoint()) * c(0.3, 0.0) + (&vb * vb.adjoint()) * c(0.7, 0.0)
    };
    let state = State64::from_density(3, &rho).unwrap();
    let oracle = (sum_matrix(&h) * &rho).trace();
    assert!((expectation_raw(&h, &state).unwrap() - oracle).norm() < 1e-12);
}

#[test]
fn ground_energy_matches_dense_spectrum() {
    let mut r = rng(5);
    for n in 1..=4 {
        for _ in 0..25 {
            let h = random_hamiltonian(&mut r, n, 7);
            let (e, psi) = exact_ground_state(&h).unwrap();
            let spectrum = hermitian_spectrum(&sum_matrix(&h));
            assert!((e - spectrum[0]).abs() < 1e-10);
            assert!((expectation(&h, &psi).unwrap() - e).abs() < 1e-10);
        }
    }
}

#[test]
fn ground_state_examples() {
    let h: PauliSum64 = parse_pauli_sum("-1.0 Z").unwrap();
    let (e, psi) = exact_ground_state(&h).unwrap();
    assert_eq!(e, -1.0);
    assert!((psi.probability(0) - 1.0).abs() < 1e-12);
    let h: PauliSum64 = parse_pauli_sum("0.5 XX\n0.5 YY\n0.5 ZZ").unwrap();
    let (e, _) = exact_ground_state(&h).unwrap();
    assert!((e + 1.5).abs() < 1e-12);
}

#[test]
fn non_hermitian_expectation_is_rejected() {
    let h: PauliSum64 = parse_pauli_sum("1.0 0.5 X").unwrap();
    let s = State64::basis(1, 0).unwrap();
    assert!(expectation(&h, &s).is_err());
    assert!(expectation_raw(&h, &s).is_ok());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_pauli_sum::<f64>("0.5 ZZ\n# comment\nabc XX").unwrap_err();
    assert!(matches!(err, mrem::Error::Parse { line: 3, .. }));
    let err = parse_pauli_sum::<f64>("0.5 ZZ\n0.5 Z").unwrap_err();
    assert!(matches!(err, mrem::Error::Parse { line: 2, .. }));
}

fn arb_sum(n: usize) -> impl Strategy<Value = PauliSum64> {
    proptest::collection::vec((-2.0f64..2.0, proptest::collection::vec(0usize..4, n)), 1..6).prop_map(move |terms| {
        let labels: Vec<(f64, String)> = terms
            .into_iter()
            .map(|(v, ops)| (v, ops.into_iter().map(|k| ['I', 'X', 'Y', 'Z'][k]).collect()))
            .collect();
        let refs: Vec<(f64, &str)> = labels.iter().map(|(v, l)| (*v, l.as_str())).collect();
        PauliSum64::from_labels(&refs).unwrap()
    })
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in arb_sum(3), b in arb_sum(3), d in arb_sum(3)) {
        let left = a.checked_mul(&b).unwrap().checked_mul(&d).unwrap();
        let right = a.checked_mul(&b.checked_mul(&d).unwrap()).unwrap();
        prop_assert!((sum_matrix(&left) - sum_matrix(&right)).camax() < 1e-10);
    }

    #[test]
    fn real_sums_are_hermitian(a in arb_sum(2)) {
        prop_assert!(a.is_hermitian());
        let m = sum_matrix(&a);
        prop_assert!((&m - m.adjoint()).camax() < 1e-12);
    }

    #[test]
    fn text_round_trip(a in arb_sum(4)) {
        let back: PauliSum64 = parse_pauli_sum(&a.to_text()).unwrap();
        prop_assert_eq!(back, a);
    }
}
