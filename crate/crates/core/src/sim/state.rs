use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{Basis, Real, DENSITY_QUBIT_LIMIT, STATEVECTOR_QUBIT_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateForm {
    Pure,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Repr<T> {
    Pure(Vec<Complex<T>>),
    /// Density matrix vectorized as a `2n`-qubit register, entry `(r, c)` at
    /// index `(r << n) | c`.
    Mixed(Vec<Complex<T>>),
}

/// A pure statevector or a density matrix on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState<T> {
    n_qubits: usize,
    pub(crate) repr: Repr<T>,
}

pub(crate) fn norm_tolerance<T: Real>() -> T {
    T::of(1e-10).max(T::epsilon() * T::of(1000.0))
}

fn check_capacity(n_qubits: usize, form: StateForm) -> Result<()> {
    let (what, limit) = match form {
        StateForm::Pure => ("statevector", STATEVECTOR_QUBIT_LIMIT),
        StateForm::Mixed => ("density matrix", DENSITY_QUBIT_LIMIT),
    };
    if n_qubits > limit {
        return Err(Error::Capacity {
            what,
            requested: n_qubits,
            limit,
        });
    }
    Ok(())
}

impl<T: Real> QuantumState<T> {
    /// The computational basis state `|basis>`.
    pub fn basis(n_qubits: usize, basis: Basis) -> Result<Self> {
        check_capacity(n_qubits, StateForm::Pure)?;
        let dim = 1usize << n_qubits;
        if basis as u128 >= dim as u128 {
            return Err(Error::dim(format!(
                "basis index {basis} outside a {n_qubits}-qubit register"
            )));
        }
        let mut amps = vec![Complex::zero(); dim];
        amps[basis as usize] = Complex::one();
        Ok(Self {
            n_qubits,
            repr: Repr::Pure(amps),
        })
    }

    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_capacity(n_qubits, StateForm::Pure)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::dim(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let norm: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - T::one()).abs() > norm_tolerance() {
            return Err(Error::contract(format!("state norm {norm} differs from 1")));
        }
        Ok(Self {
            n_qubits,
            repr: Repr::Pure(amplitudes),
        })
    }

    /// Like [`from_amplitudes`](Self::from_amplitudes) but rescales to unit norm.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(Error::contract("zero vector has no normalized state"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::from_amplitudes(n_qubits, amplitudes)
    }

    /// Builds a mixed state from a row-major `2^n x 2^n` matrix.
    pub fn from_density(n_qubits: usize, rho: &DMatrix<Complex<T>>) -> Result<Self> {
        check_capacity(n_qubits, StateForm::Mixed)?;
        let dim = 1usize << n_qubits;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::dim(format!(
                "{}x{} density matrix for {n_qubits} qubits",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let mut data = vec![Complex::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[(r << n_qubits) | c] = rho[(r, c)];
            }
        }
        let state = Self {
            n_qubits,
            repr: Repr::Mixed(data),
        };
        let tr = state.trace();
        if (tr.re - T::one()).abs() > norm_tolerance() || tr.im.abs() > norm_tolerance() {
            return Err(Error::contract(format!("density matrix trace {tr} differs from 1")));
        }
        Ok(state)
    }

    pub(crate) fn from_repr(n_qubits: usize, repr: Repr<T>) -> Self {
        Self { n_qubits, repr }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn form(&self) -> StateForm {
        match self.repr {
            Repr::Pure(_) => StateForm::Pure,
            Repr::Mixed(_) => StateForm::Mixed,
        }
    }

    pub fn is_pure(&self) -> bool {
        self.form() == StateForm::Pure
    }

    /// Statevector amplitudes, `None` for a mixed state.
    pub fn amplitudes(&self) -> Option<&[Complex<T>]> {
        match &self.repr {
            Repr::Pure(a) => Some(a),
            Repr::Mixed(_) => None,
        }
    }

    /// `rho[r][c]`; for a pure state `psi[r] * conj(psi[c])`.
    pub fn density_entry(&self, r: usize, c: usize) -> Complex<T> {
        match &self.repr {
            Repr::Pure(a) => a[r] * a[c].conj(),
            Repr::Mixed(d) => d[(r << self.n_qubits) | c],
        }
    }

    pub fn probability(&self, basis: Basis) -> T {
        let b = basis as usize;
        match &self.repr {
            Repr::Pure(a) => a[b].norm_sqr(),
            Repr::Mixed(d) => d[(b << self.n_qubits) | b].re,
        }
    }

    pub fn trace(&self) -> Complex<T> {
        match &self.repr {
            Repr::Pure(a) => Complex::new(a.iter().map(|x| x.norm_sqr()).sum(), T::zero()),
            Repr::Mixed(d) => (0..self.dim())
                .map(|i| d[(i << self.n_qubits) | i])
                .fold(Complex::zero(), |acc, x| acc + x),
        }
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> T {
        match &self.repr {
            Repr::Pure(_) => T::one(),
            Repr::Mixed(d) => d.iter().map(|x| x.norm_sqr()).sum(),
        }
    }

    /// Converts a pure state to its projector; mixed states are returned as is.
    pub fn to_mixed(&self) -> Result<Self> {
        match &self.repr {
            Repr::Mixed(_) => Ok(self.clone()),
            Repr::Pure(a) => {
                check_capacity(self.n_qubits, StateForm::Mixed)?;
                let n = self.n_qubits;
                let dim = self.dim();
                let mut d = vec![Complex::zero(); dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        d[(r << n) | c] = a[r] * a[c].conj();
                    }
                }
                Ok(Self::from_repr(n, Repr::Mixed(d)))
            }
        }
    }

    pub fn density_matrix(&self) -> DMatrix<Complex<T>> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |r, c| self.density_entry(r, c))
    }

    /// `|<self|other>|^2` for pure states, `tr(rho sigma)` in general.
    pub fn fidelity_like(&self, other: &Self) -> Result<T> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::dim("states on different registers"));
        }
        if let (Repr::Pure(a), Repr::Pure(b)) = (&self.repr, &other.repr) {
            let ov = a
                .iter()
                .zip(b)
                .fold(Complex::zero(), |acc: Complex<T>, (x, y)| acc + x.conj() * y);
            return Ok(ov.norm_sqr());
        }
        let dim = self.dim();
        let mut acc = Complex::zero();
        for r in 0..dim {
            for c in 0..dim {
                acc += self.density_entry(r, c) * other.density_entry(c, r);
            }
        }
        Ok(acc.re)
    }

    /// Largest deviation between two states' density matrices.
    pub fn max_density_deviation(&self, other: &Self) -> T {
        let dim = self.dim();
        let mut worst = T::zero();
        for r in 0..dim {
            for c in 0..dim {
                worst = worst.max((self.density_entry(r, c) - other.density_entry(r, c)).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_bounds() {
        let s = QuantumState::<f64>::basis(3, 5).unwrap();
        assert_eq!(s.probability(5), 1.0);
        assert!(QuantumState::<f64>::basis(3, 8).is_err());
        assert!(matches!(QuantumState::<f64>::basis(25, 0), Err(Error::Capacity { .. })));
    }

    #[test]
    fn projector_round_trip() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = QuantumState::from_amplitudes(1, vec![Complex::new(h, 0.0), Complex::new(0.0, h)]).unwrap();
        let m = s.to_mixed().unwrap();
        assert!((m.purity() - 1.0).abs() < 1e-14);
        assert!((m.density_entry(0, 1) - Complex::new(0.0, -0.5)).norm() < 1e-15);
        let back = QuantumState::from_density(1, &m.density_matrix()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_unnormalized() {
        let err = QuantumState::<f64>::from_amplitudes(1, vec![Complex::one(), Complex::one()]);
        assert!(matches!(err, Err(Error::Contract(_))));
    }
}
