use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use super::sum::PauliSum;
use super::term::{times_i_pow, PauliTerm};
use crate::error::{Error, Result};
use crate::sim::QuantumState;
use crate::{Basis, Real, DENSE_QUBIT_LIMIT};

/// Registers at least this wide evaluate terms on the rayon pool.
const PARALLEL_QUBITS: usize = 10;

fn check_dense(n_qubits: usize, what: &'static str) -> Result<()> {
    if n_qubits > DENSE_QUBIT_LIMIT {
        return Err(Error::Capacity {
            what,
            requested: n_qubits,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    Ok(())
}

/// The `2^n x 2^n` matrix of `h`, qubit 0 in the least significant slot.
pub fn to_dense<T: Real>(h: &PauliSum<T>) -> Result<DMatrix<Complex<T>>> {
    check_dense(h.n_qubits(), "dense matrix")?;
    let dim = 1usize << h.n_qubits();
    let mut m = DMatrix::zeros(dim, dim);
    for t in h.terms() {
        for col in 0..dim {
            let (row, amp) = t.apply_to_basis(col as Basis);
            m[(row as usize, col)] += amp;
        }
    }
    Ok(m)
}

fn term_expectation<T: Real>(t: &PauliTerm<T>, state: &QuantumState<T>) -> Complex<T> {
    let x = t.x_mask() as usize;
    let mut acc: Complex<T> = Complex::zero();
    match state.amplitudes() {
        Some(psi) => {
            for (i, a) in psi.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                acc += times_i_pow(psi[i ^ x].conj() * *a, t.string_phase(i as Basis));
            }
        }
        None => {
            for i in 0..state.dim() {
                acc += times_i_pow(state.density_entry(i, i ^ x), t.string_phase(i as Basis));
            }
        }
    }
    acc * t.coeff()
}

/// `<psi|h|psi>` or `tr(rho h)` as a complex number, term by term, with no
/// Hermiticity requirement. The summation order is fixed.
pub fn expectation_raw<T: Real>(h: &PauliSum<T>, state: &QuantumState<T>) -> Result<Complex<T>> {
    if h.n_qubits() != state.n_qubits() {
        return Err(Error::dim(format!(
            "{}-qubit operator on a {}-qubit state",
            h.n_qubits(),
            state.n_qubits()
        )));
    }
    let parts: Vec<Complex<T>> = if state.n_qubits() >= PARALLEL_QUBITS {
        h.terms().par_iter().map(|t| term_expectation(t, state)).collect()
    } else {
        h.terms().iter().map(|t| term_expectation(t, state)).collect()
    };
    Ok(parts.into_iter().fold(Complex::zero(), |a, b| a + b))
}

/// Real expectation value of a Hermitian sum.
pub fn expectation<T: Real>(h: &PauliSum<T>, state: &QuantumState<T>) -> Result<T> {
    if !h.is_hermitian() {
        return Err(Error::contract(format!(
            "expectation of a non-Hermitian sum (max imaginary coefficient {})",
            h.max_imaginary()
        )));
    }
    let e = expectation_raw(h, state)?;
    let tol = T::of(super::HERMITIAN_TOLERANCE).max(T::epsilon() * T::of(100.0)) * T::one().max(h.one_norm());
    if e.im.abs() > tol {
        return Err(Error::Numerical(format!(
            "imaginary residue {} in a Hermitian expectation",
            e.im
        )));
    }
    Ok(e.re)
}

/// Lowest eigenvalue and a normalized eigenvector by dense diagonalization.
/// The eigenvector's largest entry is made real and positive.
pub fn exact_ground_state<T: Real + RealField>(h: &PauliSum<T>) -> Result<(T, QuantumState<T>)> {
    check_dense(h.n_qubits(), "exact diagonalization")?;
    if !h.is_hermitian() {
        return Err(Error::contract("exact diagonalization of a non-Hermitian sum"));
    }
    let m = to_dense(&h.real_part())?;
    let eig = m.symmetric_eigen();
    let (k, energy) =
        eig.eigenvalues.iter().enumerate().fold(
            (0, T::infinity()),
            |best, (i, v)| if *v < best.1 { (i, *v) } else { best },
        );
    let mut v: Vec<Complex<T>> = eig.eigenvectors.column(k).iter().copied().collect();
    let pivot = v.iter().copied().fold(
        Complex::zero(),
        |best: Complex<T>, x| if x.norm() > best.norm() { x } else { best },
    );
    let phase = pivot.conj() / pivot.norm();
    for x in &mut v {
        *x *= phase;
    }
    Ok((energy, QuantumState::normalized(h.n_qubits(), v)?))
}
