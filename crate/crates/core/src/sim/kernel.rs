use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;

use crate::Real;

/// Applies `m` to the bits `positions` of `v` (a register of `log2 len`
/// bits). `positions[0]` is the most significant sub-index bit.
pub(crate) fn apply_matrix<T: Real>(v: &mut [Complex<T>], positions: &[usize], m: &DMatrix<Complex<T>>) {
    let k = positions.len();
    let d = 1usize << k;
    debug_assert_eq!(m.nrows(), d);
    let offsets: Vec<usize> = (0..d)
        .map(|j| {
            (0..k)
                .filter(|t| j >> t & 1 == 1)
                .map(|t| 1usize << positions[k - 1 - t])
                .sum()
        })
        .collect();
    let mask: usize = positions.iter().map(|p| 1usize << p).sum();
    // Skip zero entries: most gate matrices are sparse.
    let entries: Vec<Vec<(usize, Complex<T>)>> = (0..d)
        .map(|r| {
            (0..d)
                .filter(|&c| !m[(r, c)].is_zero())
                .map(|c| (c, m[(r, c)]))
                .collect()
        })
        .collect();
    let mut gathered = vec![Complex::zero(); d];
    for base in 0..v.len() {
        if base & mask != 0 {
            continue;
        }
        for (j, off) in offsets.iter().enumerate() {
            gathered[j] = v[base | off];
        }
        for (row, off) in entries.iter().zip(&offsets) {
            v[base | off] = row.iter().fold(Complex::zero(), |acc, (c, x)| acc + *x * gathered[*c]);
        }
    }
}

/// Unitary conjugation `U rho U^dagger` on a vectorized density matrix.
pub(crate) fn conjugate_density<T: Real>(
    rho: &mut [Complex<T>],
    n_qubits: usize,
    qubits: &[usize],
    u: &DMatrix<Complex<T>>,
) {
    let rows: Vec<usize> = qubits.iter().map(|q| q + n_qubits).collect();
    apply_matrix(rho, &rows, u);
    apply_matrix(rho, qubits, &u.map(|x| x.conj()));
}

/// Superoperator `sum_k K (x) conj(K)` acting on (row bits, column bits).
pub(crate) fn superoperator<T: Real>(kraus: &[DMatrix<Complex<T>>]) -> DMatrix<Complex<T>> {
    let d = kraus[0].nrows();
    let mut s = DMatrix::zeros(d * d, d * d);
    for k in kraus {
        s += k.kronecker(&k.map(|x| x.conj()));
    }
    s
}

/// Applies a superoperator built by [`superoperator`] on `qubits`.
pub(crate) fn apply_superoperator<T: Real>(
    rho: &mut [Complex<T>],
    n_qubits: usize,
    qubits: &[usize],
    s: &DMatrix<Complex<T>>,
) {
    let mut positions: Vec<usize> = qubits.iter().map(|q| q + n_qubits).collect();
    positions.extend_from_slice(qubits);
    apply_matrix(rho, &positions, s);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_order() {
        // CX with control on qubit 2, target on qubit 0 of a 3-qubit register.
        let mut cx = DMatrix::<Complex<f64>>::identity(4, 4);
        cx[(2, 2)] = Complex::zero();
        cx[(3, 3)] = Complex::zero();
        cx[(2, 3)] = Complex::new(1.0, 0.0);
        cx[(3, 2)] = Complex::new(1.0, 0.0);
        let mut v = vec![Complex::zero(); 8];
        v[0b100] = Complex::new(1.0, 0.0);
        apply_matrix(&mut v, &[2, 0], &cx);
        assert_eq!(v[0b101], Complex::new(1.0, 0.0));
        assert_eq!(v[0b100], Complex::zero());
    }
}
