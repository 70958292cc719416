//! Jordan-Wigner images of fermionic operators, the Hartree-Fock
//! determinant and the total-spin operator.
//!
//! Spin-orbitals are interleaved: index `2p` is spatial orbital `p` with spin
//! alpha, `2p + 1` the same orbital with spin beta. Qubit `j` holds the
//! occupation of spin-orbital `j`, with `|1>` meaning occupied.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm};
use crate::{Basis, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitalLayout {
    pub n_spatial: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
}

impl OrbitalLayout {
    pub fn new(n_spatial: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        let layout = Self {
            n_spatial,
            n_alpha,
            n_beta,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spatial == 0 {
            return Err(Error::Config("n_spatial must be positive".into()));
        }
        if self.n_alpha > self.n_spatial || self.n_beta > self.n_spatial {
            return Err(Error::Config(format!(
                "{} alpha / {} beta electrons do not fit in {} spatial orbitals",
                self.n_alpha, self.n_beta, self.n_spatial
            )));
        }
        if self.n_qubits() > 63 {
            return Err(Error::Capacity {
                what: "orbital layout",
                requested: self.n_qubits(),
                limit: 63,
            });
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_spatial
    }

    pub fn n_electrons(&self) -> usize {
        self.n_alpha + self.n_beta
    }

    pub fn alpha(p: usize) -> usize {
        2 * p
    }

    pub fn beta(p: usize) -> usize {
        2 * p + 1
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinPenaltyConfig {
    pub lambda: f64,
}

impl SpinPenaltyConfig {
    pub fn new(lambda: f64) -> Result<Self> {
        let cfg = Self { lambda };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!("lambda = {} must be >= 0", self.lambda)));
        }
        Ok(())
    }
}

fn check_index(j: usize, n: usize) -> Result<()> {
    if j >= n {
        return Err(Error::dim(format!("spin-orbital {j} outside {n} qubits")));
    }
    Ok(())
}

/// `Z_0 ... Z_{j-1} (X_j -/+ i Y_j) / 2`: creation for `dagger`, else
/// annihilation.
fn ladder<T: Real>(j: usize, n: usize, dagger: bool) -> Result<PauliSum<T>> {
    check_index(j, n)?;
    let string: Basis = (1 << j) - 1;
    let bit: Basis = 1 << j;
    let half = T::of(0.5);
    let y_sign = if dagger { -half } else { half };
    let x = PauliTerm::new(n, bit, string, Complex::new(half, T::zero()))?;
    // Y_j Z_{<j}: masks (x = bit, z = bit | string), coefficient +-i/2.
    let y = PauliTerm::new(n, bit, bit | string, Complex::new(T::zero(), y_sign))?;
    PauliSum::from_terms(n, [x, y])
}

pub fn jw_creation<T: Real>(j: usize, n: usize) -> Result<PauliSum<T>> {
    ladder(j, n, true)
}

pub fn jw_annihilation<T: Real>(j: usize, n: usize) -> Result<PauliSum<T>> {
    ladder(j, n, false)
}

/// Qubit image of `a^dagger_p a_q`.
pub fn jw_excitation<T: Real>(p: usize, q: usize, n: usize) -> Result<PauliSum<T>> {
    jw_creation::<T>(p, n)?.checked_mul(&jw_annihilation(q, n)?)
}

/// `N = sum_j (I - Z_j) / 2`.
pub fn number_operator<T: Real>(n: usize) -> Result<PauliSum<T>> {
    let mut acc = PauliSum::zero(n);
    for j in 0..n {
        acc = acc.checked_add(&jw_excitation(j, j, n)?)?;
    }
    Ok(acc)
}

/// The determinant with the lowest `n_alpha` alpha and `n_beta` beta
/// spin-orbitals occupied.
pub fn hf_bitstring(layout: &OrbitalLayout) -> Basis {
    let alpha: Basis = (0..layout.n_alpha).map(|p| 1 << OrbitalLayout::alpha(p)).sum();
    let beta: Basis = (0..layout.n_beta).map(|p| 1 << OrbitalLayout::beta(p)).sum();
    alpha | beta
}

/// `S_+ = sum_p a^dagger_{p alpha} a_{p beta}`.
pub fn s_plus<T: Real>(layout: &OrbitalLayout) -> Result<PauliSum<T>> {
    let n = layout.n_qubits();
    let mut acc = PauliSum::zero(n);
    for p in 0..layout.n_spatial {
        acc = acc.checked_add(&jw_excitation(OrbitalLayout::alpha(p), OrbitalLayout::beta(p), n)?)?;
    }
    Ok(acc)
}

pub fn s_minus<T: Real>(layout: &OrbitalLayout) -> Result<PauliSum<T>> {
    Ok(s_plus::<T>(layout)?.adjoint())
}

/// `S_z = (N_alpha - N_beta) / 2`.
pub fn s_z<T: Real>(layout: &OrbitalLayout) -> Result<PauliSum<T>> {
    let n = layout.n_qubits();
    let mut acc = PauliSum::zero(n);
    let half = T::of(0.5);
    for p in 0..layout.n_spatial {
        let na = jw_excitation::<T>(OrbitalLayout::alpha(p), OrbitalLayout::alpha(p), n)?;
        let nb = jw_excitation::<T>(OrbitalLayout::beta(p), OrbitalLayout::beta(p), n)?;
        acc = acc.checked_add(&na.checked_sub(&nb)?.scaled_real(half))?;
    }
    Ok(acc)
}

/// `S^2 = S_- S_+ + S_z (S_z + 1)`.
pub fn s_squared_operator<T: Real>(layout: &OrbitalLayout) -> Result<PauliSum<T>> {
    let n = layout.n_qubits();
    let sz = s_z::<T>(layout)?;
    let one = PauliSum::identity(n, Complex::new(T::one(), T::zero()));
    let lowering = s_minus::<T>(layout)?.checked_mul(&s_plus(layout)?)?;
    lowering.checked_add(&sz.checked_mul(&sz.checked_add(&one)?)?)
}

/// `H + lambda S^2` on the untapered register.
pub fn add_spin_penalty<T: Real>(
    h: &PauliSum<T>,
    layout: &OrbitalLayout,
    cfg: &SpinPenaltyConfig,
) -> Result<PauliSum<T>> {
    cfg.validate()?;
    if h.n_qubits() != layout.n_qubits() {
        return Err(Error::dim(format!(
            "{}-qubit Hamiltonian with a {}-spin-orbital layout",
            h.n_qubits(),
            layout.n_qubits()
        )));
    }
    if cfg.lambda == 0.0 {
        return Ok(h.clone());
    }
    h.checked_add(&s_squared_operator::<T>(layout)?.scaled_real(T::of(cfg.lambda)))
}
