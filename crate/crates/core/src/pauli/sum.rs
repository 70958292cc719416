use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use super::term::PauliTerm;
use super::{DROP_TOLERANCE, HERMITIAN_TOLERANCE};
use crate::error::{Error, Result};
use crate::{Basis, Real};

/// A normalized sum of Pauli terms on a fixed register.
///
/// Terms are kept sorted by `(z_mask, x_mask)` with duplicates merged and
/// negligible coefficients dropped, so structural equality is operator
/// equality.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum<T> {
    n_qubits: usize,
    terms: Vec<PauliTerm<T>>,
}

impl<T: Real> PauliSum<T> {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn identity(n_qubits: usize, coeff: Complex<T>) -> Self {
        Self::normalized(n_qubits, [PauliTerm::identity(n_qubits, coeff)])
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = PauliTerm<T>>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        if let Some(bad) = terms.iter().find(|t| t.n_qubits() != n_qubits) {
            return Err(Error::dim(format!(
                "term on {} qubits in a {n_qubits}-qubit sum",
                bad.n_qubits()
            )));
        }
        Ok(Self::normalized(n_qubits, terms))
    }

    /// Builds a sum from `(coefficient, label)` pairs.
    pub fn from_labels(pairs: &[(f64, &str)]) -> Result<Self> {
        let n = pairs.first().map_or(0, |(_, l)| l.len());
        let terms = pairs
            .iter()
            .map(|(c, l)| PauliTerm::from_label(l, Complex::new(T::of(*c), T::zero())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, terms)
    }

    fn normalized<I>(n_qubits: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = PauliTerm<T>>,
    {
        let mut acc: BTreeMap<(Basis, Basis), Complex<T>> = BTreeMap::new();
        for t in terms {
            *acc.entry((t.z_mask(), t.x_mask())).or_insert_with(Complex::zero) += t.coeff();
        }
        let drop = T::of(DROP_TOLERANCE);
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= drop)
            .map(|((z, x), c)| PauliTerm::new(n_qubits, x, z, c).expect("masks validated on input"))
            .collect();
        Self { n_qubits, terms }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the string with the given masks (zero if absent).
    pub fn coeff_of(&self, x_mask: Basis, z_mask: Basis) -> Complex<T> {
        self.terms
            .binary_search_by(|t| (t.z_mask(), t.x_mask()).cmp(&(z_mask, x_mask)))
            .map_or_else(|_| Complex::zero(), |i| self.terms[i].coeff())
    }

    /// Sum of coefficient magnitudes.
    pub fn one_norm(&self) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| acc + t.coeff().norm())
    }

    /// Largest imaginary coefficient; every Pauli string is self-adjoint, so
    /// the sum is Hermitian exactly when this vanishes.
    pub fn max_imaginary(&self) -> T {
        self.terms.iter().map(|t| t.coeff().im.abs()).fold(T::zero(), T::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_imaginary() <= T::of(HERMITIAN_TOLERANCE)
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|t| t.with_coeff(t.coeff().conj())).collect(),
        }
    }

    /// Drops imaginary parts; callers check [`is_hermitian`](Self::is_hermitian) first.
    pub fn real_part(&self) -> Self {
        Self::normalized(
            self.n_qubits,
            self.terms
                .iter()
                .map(|t| t.with_coeff(Complex::new(t.coeff().re, T::zero()))),
        )
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::dim(format!(
                "operands act on {} and {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        Ok(Self::normalized(
            self.n_qubits,
            self.terms.iter().chain(other.terms.iter()).copied(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scaled(Complex::new(-T::one(), T::zero())))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut products = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                products.push(a.multiply(b)?);
            }
        }
        Ok(Self::normalized(self.n_qubits, products))
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self::normalized(
            self.n_qubits,
            self.terms.iter().map(|t| t.with_coeff(t.coeff() * factor)),
        )
    }

    pub fn scaled_real(&self, factor: T) -> Self {
        self.scaled(Complex::new(factor, T::zero()))
    }

    /// Identity coefficient, i.e. `tr(H) / 2^n`.
    pub fn trace_per_dim(&self) -> Complex<T> {
        self.coeff_of(0, 0)
    }

    /// Converts the coefficients to another scalar type.
    pub fn cast<U: Real>(&self) -> PauliSum<U> {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let c = t.coeff();
                    PauliTerm::new(
                        t.n_qubits(),
                        t.x_mask(),
                        t.z_mask(),
                        Complex::new(U::of(c.re.as_f64()), U::of(c.im.as_f64())),
                    )
                    .expect("same masks")
                })
                .collect(),
        }
    }
}
