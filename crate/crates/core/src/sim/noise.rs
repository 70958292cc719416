use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::kernel::superoperator;
use crate::error::{Error, Result};
use crate::Real;

/// Gate-attached noise: thermal relaxation on every acted qubit, then a
/// depolarizing channel on the gate's qubits. Times share one arbitrary
/// unit; a missing `t1` / `t2` means no relaxation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub depol_1q: f64,
    pub depol_2q: f64,
    #[serde(default)]
    pub t1: Option<f64>,
    #[serde(default)]
    pub t2: Option<f64>,
    #[serde(default)]
    pub dur_1q: f64,
    #[serde(default)]
    pub dur_2q: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for NoiseModel {
    /// Representative superconducting-device magnitudes in nanoseconds.
    fn default() -> Self {
        Self {
            depol_1q: 3e-4,
            depol_2q: 1e-2,
            t1: Some(100_000.0),
            t2: Some(100_000.0),
            dur_1q: 35.0,
            dur_2q: 300.0,
            seed: 0,
        }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            depol_1q: 0.0,
            depol_2q: 0.0,
            t1: None,
            t2: None,
            dur_1q: 0.0,
            dur_2q: 0.0,
            seed: 0,
        }
    }

    /// Only depolarizing noise, no relaxation.
    pub fn depolarizing(depol_1q: f64, depol_2q: f64) -> Self {
        Self {
            depol_1q,
            depol_2q,
            ..Self::noiseless()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("depol_1q", self.depol_1q), ("depol_2q", self.depol_2q)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} is not a probability")));
            }
        }
        for (name, d) in [("dur_1q", self.dur_1q), ("dur_2q", self.dur_2q)] {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(Error::Config(format!("{name} = {d} must be finite and >= 0")));
            }
        }
        for (name, t) in [("t1", self.t1), ("t2", self.t2)] {
            if let Some(t) = t {
                if t.is_nan() || t <= 0.0 {
                    return Err(Error::Config(format!("{name} = {t} must be positive")));
                }
            }
        }
        let t1 = self.t1.unwrap_or(f64::INFINITY);
        let t2 = self.t2.unwrap_or(f64::INFINITY);
        if t2 > 2.0 * t1 {
            return Err(Error::Config(format!("t2 = {t2} exceeds 2 * t1 = {}", 2.0 * t1)));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.depol_1q == 0.0 && self.depol_2q == 0.0 && !self.has_relaxation()
    }

    fn has_relaxation(&self) -> bool {
        let active = |t: Option<f64>| t.is_some_and(f64::is_finite);
        (active(self.t1) || active(self.t2)) && (self.dur_1q > 0.0 || self.dur_2q > 0.0)
    }

    /// `(gamma, p_z)` for a step of length `dur`: amplitude damping with
    /// `gamma = 1 - exp(-dur / t1)`, then dephasing so that coherences decay
    /// as `exp(-dur / t2)` overall.
    pub fn relaxation_rates(&self, dur: f64) -> (f64, f64) {
        let t1 = self.t1.unwrap_or(f64::INFINITY);
        let t2 = self.t2.unwrap_or(f64::INFINITY);
        let gamma = 1.0 - (-dur / t1).exp();
        let lambda = (-dur / t2).exp() / (-dur / (2.0 * t1)).exp();
        (gamma, ((1.0 - lambda) / 2.0).max(0.0))
    }

    pub(crate) fn channels<T: Real>(&self) -> GateChannels<T> {
        let relax = |dur: f64| {
            if dur > 0.0 && self.has_relaxation() {
                let (gamma, pz) = self.relaxation_rates(dur);
                Some(thermal_superop::<T>(gamma, pz))
            } else {
                None
            }
        };
        GateChannels {
            relax_1q: relax(self.dur_1q),
            relax_2q: relax(self.dur_2q),
            depol_1q: (self.depol_1q > 0.0).then(|| superoperator(&depolarizing_kraus(1, self.depol_1q))),
            depol_2q: (self.depol_2q > 0.0).then(|| superoperator(&depolarizing_kraus(2, self.depol_2q))),
        }
    }
}

pub(crate) struct GateChannels<T> {
    pub relax_1q: Option<DMatrix<Complex<T>>>,
    pub relax_2q: Option<DMatrix<Complex<T>>>,
    pub depol_1q: Option<DMatrix<Complex<T>>>,
    pub depol_2q: Option<DMatrix<Complex<T>>>,
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

fn pauli_matrix<T: Real>(index: usize) -> DMatrix<Complex<T>> {
    let z = Complex::zero();
    let o = Complex::one();
    match index {
        0 => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        1 => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        2 => DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        _ => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Kraus operators of `rho -> (1 - p) rho + p I / d` on `k` qubits, written
/// as the uniform Pauli channel.
pub fn depolarizing_kraus<T: Real>(k: usize, p: f64) -> Vec<DMatrix<Complex<T>>> {
    let n_paulis = 1usize << (2 * k);
    let w_id = 1.0 - p * (n_paulis as f64 - 1.0) / n_paulis as f64;
    let w_other = p / n_paulis as f64;
    (0..n_paulis)
        .map(|idx| {
            let mut m = DMatrix::<Complex<T>>::identity(1, 1);
            for slot in (0..k).rev() {
                m = m.kronecker(&pauli_matrix::<T>(idx >> (2 * slot) & 3));
            }
            let w = if idx == 0 { w_id } else { w_other };
            m * c::<T>(w.sqrt(), 0.0)
        })
        .collect()
}

pub fn amplitude_damping_kraus<T: Real>(gamma: f64) -> Vec<DMatrix<Complex<T>>> {
    let z = Complex::zero();
    vec![
        DMatrix::from_row_slice(2, 2, &[Complex::one(), z, z, c((1.0 - gamma).sqrt(), 0.0)]),
        DMatrix::from_row_slice(2, 2, &[z, c(gamma.sqrt(), 0.0), z, z]),
    ]
}

pub fn dephasing_kraus<T: Real>(p_z: f64) -> Vec<DMatrix<Complex<T>>> {
    vec![
        pauli_matrix::<T>(0) * c::<T>((1.0 - p_z).sqrt(), 0.0),
        pauli_matrix::<T>(3) * c::<T>(p_z.sqrt(), 0.0),
    ]
}

fn thermal_superop<T: Real>(gamma: f64, p_z: f64) -> DMatrix<Complex<T>> {
    superoperator(&dephasing_kraus::<T>(p_z)) * superoperator(&amplitude_damping_kraus::<T>(gamma))
}

/// Shot-noise model: the energy estimator is drawn from a normal
/// distribution around the exact value with variance `Var(H) / shots`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotModel {
    pub shots: u64,
    pub enabled: bool,
}

impl Default for ShotModel {
    fn default() -> Self {
        Self {
            shots: 10_000_000,
            enabled: true,
        }
    }
}

impl ShotModel {
    pub fn off() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn with_shots(shots: u64) -> Self {
        Self { shots, enabled: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config("shots must be >= 1".into()));
        }
        Ok(())
    }
}
