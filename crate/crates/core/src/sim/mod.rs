//! Statevector and density-matrix simulation, gate noise and shot noise.

pub(crate) mod kernel;
mod noise;
mod state;

use num_complex::Complex;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::circuit::{gate_unitary, lower, Circuit, GateOp};
use crate::error::{Error, Result};
use crate::pauli::{expectation, PauliSum};
use crate::{Basis, Real};

pub use noise::{amplitude_damping_kraus, dephasing_kraus, depolarizing_kraus, NoiseModel, ShotModel};
pub use state::{QuantumState, StateForm};

use state::Repr;

fn require_bound(c: &Circuit) -> Result<()> {
    if let Some(op) = c.ops().iter().find(|op| !op.is_bound()) {
        return Err(Error::contract(format!(
            "circuit has an unbound {} angle (slot {})",
            op.kind(),
            op.angle().and_then(|a| a.slot()).unwrap_or(0)
        )));
    }
    Ok(())
}

/// Applies one bound gate to a statevector of `2^n` amplitudes.
pub(crate) fn apply_gate_pure<T: Real>(amps: &mut [Complex<T>], op: &GateOp) -> Result<()> {
    let u = gate_unitary::<T>(op)?;
    kernel::apply_matrix(amps, op.qubits(), &u);
    Ok(())
}

/// `U_c |initial>` with every gate, composites included, applied exactly.
pub fn run_pure<T: Real>(c: &Circuit, initial: Basis) -> Result<QuantumState<T>> {
    require_bound(c)?;
    let mut state = QuantumState::basis(c.n_qubits(), initial)?;
    if let Repr::Pure(amps) = &mut state.repr {
        for op in c.ops() {
            apply_gate_pure(amps, op)?;
        }
    }
    Ok(state)
}

/// Runs a bound circuit from an arbitrary pure state.
pub fn evolve_pure<T: Real>(c: &Circuit, state: &QuantumState<T>) -> Result<QuantumState<T>> {
    require_bound(c)?;
    let mut amps = state
        .amplitudes()
        .ok_or_else(|| Error::contract("evolve_pure needs a pure state"))?
        .to_vec();
    if state.n_qubits() != c.n_qubits() {
        return Err(Error::dim("state and circuit widths differ"));
    }
    for op in c.ops() {
        apply_gate_pure(&mut amps, op)?;
    }
    Ok(QuantumState::from_repr(c.n_qubits(), Repr::Pure(amps)))
}

/// Density-matrix run with gate noise. Composite gates are lowered to
/// {X, H, RY, CX} first so that noise attaches to each physical gate. Per
/// gate: the unitary, thermal relaxation on each acted qubit, then the
/// depolarizing channel of the gate's class.
pub fn run_noisy<T: Real>(c: &Circuit, initial: Basis, nm: &NoiseModel) -> Result<QuantumState<T>> {
    require_bound(c)?;
    nm.validate()?;
    let n = c.n_qubits();
    let mut state = QuantumState::<T>::basis(n, initial)?.to_mixed()?;
    let channels = nm.channels::<T>();
    let lowered = lower(c)?;
    if let Repr::Mixed(rho) = &mut state.repr {
        for op in lowered.ops() {
            let u = gate_unitary::<T>(op)?;
            kernel::conjugate_density(rho, n, op.qubits(), &u);
            let two_qubit = op.qubits().len() == 2;
            let (relax, depol) = if two_qubit {
                (&channels.relax_2q, &channels.depol_2q)
            } else {
                (&channels.relax_1q, &channels.depol_1q)
            };
            if let Some(s) = relax {
                for &q in op.qubits() {
                    kernel::apply_superoperator(rho, n, &[q], s);
                }
            }
            if let Some(s) = depol {
                kernel::apply_superoperator(rho, n, op.qubits(), s);
            }
        }
    }
    Ok(state)
}

/// Applies a Kraus channel to the given qubits of a mixed state.
pub fn apply_channel<T: Real>(
    state: &mut QuantumState<T>,
    qubits: &[usize],
    kraus: &[nalgebra::DMatrix<Complex<T>>],
) -> Result<()> {
    let n = state.n_qubits();
    if kraus.is_empty() || kraus[0].nrows() != 1 << qubits.len() {
        return Err(Error::dim("Kraus operator size does not match the qubit list"));
    }
    if qubits.iter().any(|&q| q >= n) {
        return Err(Error::dim("channel qubit outside the register"));
    }
    let s = kernel::superoperator(kraus);
    match &mut state.repr {
        Repr::Mixed(rho) => {
            kernel::apply_superoperator(rho, n, qubits, &s);
            Ok(())
        }
        Repr::Pure(_) => Err(Error::contract("channels act on mixed states")),
    }
}

/// `P|psi>` for a Pauli sum `P`, without normalization.
pub fn apply_pauli_sum<T: Real>(h: &PauliSum<T>, amps: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if amps.len() != 1usize << h.n_qubits() {
        return Err(Error::dim("Pauli sum and vector widths differ"));
    }
    let mut out = vec![Complex::zero(); amps.len()];
    for t in h.terms() {
        for (i, a) in amps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (j, ph) = t.apply_to_basis(i as Basis);
            out[j as usize] += ph * *a;
        }
    }
    Ok(out)
}

/// Seeded standard-normal draw number `stream` of the shot-noise sequence
/// for `seed`; independent of evaluation order.
pub fn shot_normal(seed: u64, stream: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    StandardNormal.sample(&mut rng)
}

/// `E + g sigma / sqrt(shots)` with `sigma^2 = <H^2> - <H>^2` and `g` the
/// `stream`-th seeded normal draw; exactly `E` when shots are disabled.
pub fn energy_with_shots<T: Real>(
    h: &PauliSum<T>,
    state: &QuantumState<T>,
    sm: &ShotModel,
    seed: u64,
    stream: u64,
) -> Result<T> {
    if !sm.enabled {
        return expectation(h, state);
    }
    let h2 = h.checked_mul(h)?;
    energy_with_shots_squared(h, &h2, state, sm, seed, stream)
}

/// [`energy_with_shots`] with a precomputed `H^2`.
pub fn energy_with_shots_squared<T: Real>(
    h: &PauliSum<T>,
    h2: &PauliSum<T>,
    state: &QuantumState<T>,
    sm: &ShotModel,
    seed: u64,
    stream: u64,
) -> Result<T> {
    let e = expectation(h, state)?;
    if !sm.enabled {
        return Ok(e);
    }
    sm.validate()?;
    let var = expectation(h2, state)? - e * e;
    let tol = T::of(1e-10).max(T::epsilon() * T::of(100.0)) * (T::one() + e * e);
    if var < -tol {
        return Err(Error::Numerical(format!("negative energy variance {var}")));
    }
    let sigma = var.max(T::zero()).sqrt();
    if sigma == T::zero() {
        return Ok(e);
    }
    let g = T::of(shot_normal(seed, stream));
    Ok(e + g * sigma / T::of(sm.shots as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Angle;
    use crate::pauli::parse_pauli_sum;

    #[test]
    fn empty_circuit_keeps_basis_state() {
        let s = run_pure::<f64>(&Circuit::new(5), 0b00001).unwrap();
        assert_eq!(s.probability(0b00001), 1.0);
    }

    #[test]
    fn x_on_qubit_zero() {
        let c = Circuit::from_ops(3, [GateOp::x(0)]).unwrap();
        let s = run_pure::<f64>(&c, 0).unwrap();
        assert_eq!(s.probability(0b001), 1.0);
    }

    #[test]
    fn unbound_is_contract_error() {
        let c = Circuit::from_ops(1, [GateOp::ry(0, Angle::param(0))]).unwrap();
        assert!(matches!(run_pure::<f64>(&c, 0), Err(Error::Contract(_))));
        assert!(matches!(
            run_noisy::<f64>(&c, 0, &NoiseModel::noiseless()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn full_depolarizing_after_x() {
        let c = Circuit::from_ops(1, [GateOp::x(0)]).unwrap();
        let rho = run_noisy::<f64>(&c, 0, &NoiseModel::depolarizing(1.0, 0.0)).unwrap();
        let z: PauliSum<f64> = parse_pauli_sum("1 Z").unwrap();
        assert!(expectation(&z, &rho).unwrap().abs() < 1e-15);
        assert!((rho.purity() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn amplitude_damping_closed_form() {
        let t1 = 50.0;
        let dur = 20.0;
        let nm = NoiseModel {
            t1: Some(t1),
            t2: Some(2.0 * t1),
            dur_1q: dur,
            ..NoiseModel::noiseless()
        };
        // X on |0> prepares |1>, the relaxation step follows the gate.
        let c = Circuit::from_ops(1, [GateOp::x(0)]).unwrap();
        let rho = run_noisy::<f64>(&c, 0, &nm).unwrap();
        let excited = (-dur / t1).exp();
        assert!((rho.probability(1) - excited).abs() < 1e-14);
        let z: PauliSum<f64> = parse_pauli_sum("1 Z").unwrap();
        let ez = expectation(&z, &rho).unwrap();
        assert!((ez - (1.0 - 2.0 * excited)).abs() < 1e-14);
    }

    #[test]
    fn shot_noise_on_x_for_zero_state() {
        let h: PauliSum<f64> = parse_pauli_sum("1 X").unwrap();
        let s = QuantumState::basis(1, 0).unwrap();
        let sm = ShotModel::with_shots(10_000);
        let e = energy_with_shots(&h, &s, &sm, 42, 3).unwrap();
        assert!((e - shot_normal(42, 3) / 100.0).abs() < 1e-15);
        assert_eq!(energy_with_shots(&h, &s, &ShotModel::off(), 42, 3).unwrap(), 0.0);
    }

    #[test]
    fn eigenstate_has_no_shot_noise() {
        let h: PauliSum<f64> = parse_pauli_sum("0.5 Z\n0.25 I").unwrap();
        let s = QuantumState::basis(1, 1).unwrap();
        let e = energy_with_shots(&h, &s, &ShotModel::with_shots(3), 1, 0).unwrap();
        assert_eq!(e, -0.25);
    }

    #[test]
    fn shot_stream_is_reproducible() {
        assert_eq!(shot_normal(5, 11), shot_normal(5, 11));
        assert_ne!(shot_normal(5, 11), shot_normal(5, 12));
    }
}
