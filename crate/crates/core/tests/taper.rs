mod common;

use common::*;
use mrem::pauli::{exact_ground_state, expectation, parse_pauli_sum, PauliTerm};
use mrem::taper::{find_symmetries, lift_state, project_determinant, sector_of_determinant, taper_operator};
use mrem::{PauliSum64, State64, SymmetrySet64};
use num_complex::Complex;
use rand::Rng;

fn is_sub_multiset(sub: &[f64], full: &[f64], tol: f64) -> bool {
    let mut used = vec![false; full.len()];
    sub.iter().all(
        |x| match (0..full.len()).find(|&i| !used[i] && (full[i] - x).abs() < tol) {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        },
    )
}

/// Random Hamiltonian commuting with `k` planted Z2 symmetries, written
/// in a random local Pauli frame so generators are not all Z-type.
fn planted(r: &mut impl Rng, n: usize, k: usize) -> PauliSum64 {
    let frame: Vec<char> = (0..n).map(|_| ['X', 'Y', 'Z'][r.random_range(0..3)]).collect();
    let relabel = |s: &str| -> String {
        s.chars()
            .enumerate()
            .map(|(i, ch)| {
                if ch == 'Z' {
                    frame[i]
                } else if ch == 'I' {
                    'I'
                } else {
                    ch
                }
            })
            .collect()
    };
    let gens: Vec<PauliTerm<f64>> = (0..k)
        .map(|_| loop {
            let z: String = (0..n).map(|_| if r.random_bool(0.5) { 'Z' } else { 'I' }).collect();
            if z.contains('Z') {
                break PauliTerm::from_label(&relabel(&z), Complex::new(1.0, 0.0)).unwrap();
            }
        })
        .collect();
    let mut pairs = Vec::new();
    while pairs.len() < 6 {
        let label = random_label(r, n);
        let t = PauliTerm::<f64>::from_label(&label, Complex::new(1.0, 0.0)).unwrap();
        if gens.iter().all(|g| g.commutes_with(&t)) {
            pairs.push((r.random_range(-1.0..1.0), label));
        }
    }
    let refs: Vec<(f64, &str)> = pairs.iter().map(|(v, l)| (*v, l.as_str())).collect();
    PauliSum64::from_labels(&refs).unwrap()
}

#[test]
fn tapered_spectra_are_sub_multisets() {
    let mut r = rng(30);
    for case in 0..50 {
        let n = r.random_range(2..=5usize);
        let k = r.random_range(1..=2usize).min(n - 1);
        let h = planted(&mut r, n, k);
        let full = hermitian_spectrum(&sum_matrix(&h));
        let sym = SymmetrySet64::for_hamiltonian(&h).unwrap();
        assert!(!sym.generators().is_empty(), "case {case}: planted symmetry not found");
        for g in sym.generators() {
            let gs = PauliSum64::from_terms(n, [*g]).unwrap();
            assert!(h.commutator(&gs).unwrap().one_norm() < 1e-12);
        }
        let mut union = Vec::new();
        let mut best = f64::INFINITY;
        for sector in sym.all_sectors() {
            let s = sym.clone().with_sector(sector).unwrap();
            let t = taper_operator(&h, &s).unwrap();
            assert_eq!(t.n_qubits(), n - s.generators().len());
            let spec = hermitian_spectrum(&sum_matrix(&t));
            assert!(is_sub_multiset(&spec, &full, 1e-10), "case {case}");
            best = best.min(spec[0]);
            union.extend(spec);
        }
        union.sort_by(f64::total_cmp);
        assert!(
            is_sub_multiset(&full, &union, 1e-10),
            "sectors do not cover the spectrum"
        );
        assert!((best - full[0]).abs() < 1e-10);
    }
}

#[test]
fn h2_fixture_tapers_to_one_qubit() {
    let text = std::fs::read_to_string(fixtures_dir().join("derived/h2_model_r0.74.txt")).unwrap();
    let h: PauliSum64 = parse_pauli_sum(&text).unwrap();
    let (e0, _) = exact_ground_state(&h).unwrap();
    let sym = SymmetrySet64::for_hamiltonian(&h)
        .unwrap()
        .with_sector_of(0b0011)
        .unwrap();
    assert_eq!(sym.generators().len(), 3);
    let t = taper_operator(&h, &sym).unwrap();
    assert_eq!(t.n_qubits(), 1);
    let (et, reduced) = exact_ground_state(&t).unwrap();
    assert!((et - e0).abs() < 1e-10);
    let lifted = lift_state(&reduced, &sym).unwrap();
    assert!((expectation(&h, &lifted).unwrap() - e0).abs() < 1e-10);
    // the HF determinant maps to a reduced basis state with the same energy
    let hf = project_determinant(0b0011, &sym).unwrap();
    let e_hf_full = expectation(&h, &State64::basis(4, 0b0011).unwrap()).unwrap();
    let e_hf_red = expectation(&t, &State64::basis(1, hf).unwrap()).unwrap();
    assert!((e_hf_full - e_hf_red).abs() < 1e-10);
}

#[test]
fn z_symmetries_of_a_diagonal_hamiltonian() {
    let h: PauliSum64 = parse_pauli_sum("0.3 ZI\n-0.2 IZ\n0.1 ZZ").unwrap();
    let gens = find_symmetries(&h).unwrap();
    assert_eq!(gens.len(), 2);
    let sector = sector_of_determinant(0b01, &gens).unwrap();
    assert_eq!(sector.len(), 2);
}

#[test]
fn no_symmetry_means_no_tapering() {
    let h: PauliSum64 = parse_pauli_sum("1.0 X\n1.0 Z").unwrap();
    let sym = SymmetrySet64::for_hamiltonian(&h).unwrap();
    assert!(sym.generators().is_empty());
    let t = taper_operator(&h, &sym).unwrap();
    assert_eq!(t, h);
}

#[test]
fn mismatched_sector_is_rejected() {
    let h: PauliSum64 = parse_pauli_sum("0.5 ZZ\n0.5 XX").unwrap();
    let sym = SymmetrySet64::for_hamiltonian(&h).unwrap();
    assert!(sym.clone().with_sector(vec![1; sym.generators().len() + 1]).is_err());
    assert!(sym.clone().with_sector(vec![2; sym.generators().len()]).is_err());
}
