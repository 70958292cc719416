use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::{Basis, Real};

/// Multiplies `c` by `i^k` exactly.
pub(crate) fn times_i_pow<T: Real>(c: Complex<T>, k: u32) -> Complex<T> {
    match k % 4 {
        0 => c,
        1 => Complex::new(-c.im, c.re),
        2 => Complex::new(-c.re, -c.im),
        _ => Complex::new(c.im, -c.re),
    }
}

pub(crate) fn mask_for(n_qubits: usize) -> Basis {
    if n_qubits >= 64 {
        Basis::MAX
    } else {
        (1 << n_qubits) - 1
    }
}

/// A coefficient-weighted N-qubit Pauli string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm<T> {
    n_qubits: usize,
    x_mask: Basis,
    z_mask: Basis,
    coeff: Complex<T>,
}

impl<T: Real> PauliTerm<T> {
    pub fn new(n_qubits: usize, x_mask: Basis, z_mask: Basis, coeff: Complex<T>) -> Result<Self> {
        if n_qubits > 63 {
            return Err(Error::Capacity {
                what: "Pauli term",
                requested: n_qubits,
                limit: 63,
            });
        }
        let allowed = mask_for(n_qubits);
        if (x_mask | z_mask) & !allowed != 0 {
            return Err(Error::dim(format!(
                "masks {x_mask:#b}/{z_mask:#b} exceed {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n_qubits,
            x_mask,
            z_mask,
            coeff,
        })
    }

    pub fn identity(n_qubits: usize, coeff: Complex<T>) -> Self {
        Self {
            n_qubits,
            x_mask: 0,
            z_mask: 0,
            coeff,
        }
    }

    /// Parses a label such as `"XIZY"`; the rightmost character is qubit 0.
    pub fn from_label(label: &str, coeff: Complex<T>) -> Result<Self> {
        let n = label.chars().count();
        let mut x = 0;
        let mut z = 0;
        for (pos, ch) in label.chars().enumerate() {
            let bit: Basis = 1 << (n - 1 - pos);
            match ch {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("bad Pauli character {other:?}"),
                    })
                }
            }
        }
        Self::new(n, x, z, coeff)
    }

    /// Single-qubit operator `op` (one of I, X, Y, Z) on `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, op: char, coeff: Complex<T>) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::dim(format!("qubit {qubit} outside {n_qubits}-qubit register")));
        }
        let bit: Basis = 1 << qubit;
        let (x, z) = match op {
            'I' => (0, 0),
            'X' => (bit, 0),
            'Y' => (bit, bit),
            'Z' => (0, bit),
            other => return Err(Error::contract(format!("unknown Pauli {other:?}"))),
        };
        Self::new(n_qubits, x, z, coeff)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> Basis {
        self.x_mask
    }

    pub fn z_mask(&self) -> Basis {
        self.z_mask
    }

    pub fn coeff(&self) -> Complex<T> {
        self.coeff
    }

    pub fn with_coeff(mut self, coeff: Complex<T>) -> Self {
        self.coeff = coeff;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    /// Same Pauli string, ignoring coefficients.
    pub fn same_string(&self, other: &Self) -> bool {
        self.x_mask == other.x_mask && self.z_mask == other.z_mask
    }

    /// Symplectic form: 0 when the strings commute, 1 when they anticommute.
    pub fn symplectic(&self, other: &Self) -> u32 {
        ((self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones()) % 2
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.symplectic(other) == 0
    }

    /// Pauli product with the phase tracked exactly.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::dim(format!(
                "Pauli product of {} and {} qubit terms",
                self.n_qubits, other.n_qubits
            )));
        }
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        // i^{a1} X^{x1} Z^{z1} i^{a2} X^{x2} Z^{z2}
        //   = i^{a1 + a2 + 2|z1 & x2|} X^{x} Z^{z} = i^{a1 + a2 - a3 + 2|z1 & x2|} P(x, z)
        let a1 = (self.x_mask & self.z_mask).count_ones();
        let a2 = (other.x_mask & other.z_mask).count_ones();
        let a3 = (x & z).count_ones();
        let swaps = (self.z_mask & other.x_mask).count_ones();
        let k = (a1 + a2 + 2 * swaps + 4 * 64 - a3) % 4;
        Ok(Self {
            n_qubits: self.n_qubits,
            x_mask: x,
            z_mask: z,
            coeff: times_i_pow(self.coeff * other.coeff, k),
        })
    }

    /// Action on a basis state: `P|b> = phase |b ^ x>`, coefficient included.
    pub fn apply_to_basis(&self, basis: Basis) -> (Basis, Complex<T>) {
        let k = (self.x_mask & self.z_mask).count_ones() + 2 * (self.z_mask & basis).count_ones();
        (basis ^ self.x_mask, times_i_pow(self.coeff, k))
    }

    /// Phase of the string alone (coefficient 1) on a basis state.
    pub(crate) fn string_phase(&self, basis: Basis) -> u32 {
        ((self.x_mask & self.z_mask).count_ones() + 2 * (self.z_mask & basis).count_ones()) % 4
    }

    pub fn label(&self) -> String {
        (0..self.n_qubits)
            .rev()
            .map(|q| {
                let bit: Basis = 1 << q;
                match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
                    (false, false) => 'I',
                    (true, false) => 'X',
                    (true, true) => 'Y',
                    (false, true) => 'Z',
                }
            })
            .collect()
    }
}

impl<T: Real> fmt::Display for PauliTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i) {}", self.coeff.re, self.coeff.im, self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn x_times_x_is_identity() {
        let x = PauliTerm::from_label("X", c(1.0, 0.0)).unwrap();
        let p = x.multiply(&x).unwrap();
        assert!(p.is_identity());
        assert_eq!(p.coeff(), c(1.0, 0.0));
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliTerm::from_label("X", c(1.0, 0.0)).unwrap();
        let z = PauliTerm::from_label("Z", c(1.0, 0.0)).unwrap();
        let p = x.multiply(&z).unwrap();
        assert_eq!(p.label(), "Y");
        assert_eq!(p.coeff(), c(0.0, -1.0));
    }

    #[test]
    fn label_round_trip_and_y_bits() {
        let t = PauliTerm::from_label("XYZI", c(1.0, 0.0)).unwrap();
        assert_eq!(t.x_mask(), 0b1100);
        assert_eq!(t.z_mask(), 0b0110);
        assert_eq!(t.label(), "XYZI");
    }

    #[test]
    fn masks_outside_register_are_rejected() {
        assert!(matches!(
            PauliTerm::<f64>::new(2, 0b100, 0, c(1.0, 0.0)),
            Err(Error::Dimension(_))
        ));
        let a = PauliTerm::<f64>::identity(2, c(1.0, 0.0));
        let b = PauliTerm::<f64>::identity(3, c(1.0, 0.0));
        assert!(matches!(a.multiply(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn y_on_basis_states() {
        let y = PauliTerm::from_label("Y", c(1.0, 0.0)).unwrap();
        // Y|0> = i|1>, Y|1> = -i|0>
        assert_eq!(y.apply_to_basis(0), (1, c(0.0, 1.0)));
        assert_eq!(y.apply_to_basis(1), (0, c(0.0, -1.0)));
    }
}
