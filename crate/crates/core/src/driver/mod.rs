//! VQE objective, implicit filtering and the REM/MREM correction.

mod imfil;
mod pes;

pub use imfil::{imfil_minimize, ImFilConfig, ImFilResult};
pub use pes::{
    read_sweep_points, run_pes_sweep, write_long_csv, write_results_csv, PesPoint, PesRow, SpinPenalty, SweepConfig,
    RESULT_COLUMNS,
};

use serde::Serialize;

use crate::circuit::{compose_init_after_ansatz, Circuit};
use crate::error::{Error, Result};
use crate::pauli::{expectation, PauliSum};
use crate::sim::{energy_with_shots_squared, run_noisy, run_pure, NoiseModel, QuantumState, ShotModel};
use crate::stateprep::MrTarget;

/// Shot-noise streams reserved for the two recorded energies so they never
/// collide with optimizer evaluations.
const STREAM_NOISY_REFERENCE: u64 = u64::MAX;
const STREAM_FINAL_ENERGY: u64 = u64::MAX - 1;

/// One VQE instance: `objective` drives the optimizer, `measured` is the
/// operator whose energies are reported. They differ only by a spin
/// penalty. The trial state is `init * ansatz(theta) |0>`.
#[derive(Clone, Debug)]
pub struct VqeProblem {
    objective: PauliSum<f64>,
    objective_sq: PauliSum<f64>,
    measured: PauliSum<f64>,
    measured_sq: PauliSum<f64>,
    ansatz: Circuit,
    init: Circuit,
    noise: Option<NoiseModel>,
    shots: ShotModel,
    seed: u64,
}

/// Which operator an energy evaluation measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Objective,
    Measured,
}

impl VqeProblem {
    /// Noiseless, shot-free problem with `measured = objective = hamiltonian`.
    pub fn new(hamiltonian: PauliSum<f64>, ansatz: Circuit, init: Circuit) -> Result<Self> {
        let n = hamiltonian.n_qubits();
        if ansatz.n_qubits() != n || init.n_qubits() != n {
            return Err(Error::dim(format!(
                "hamiltonian {n}, ansatz {}, init {} qubits",
                ansatz.n_qubits(),
                init.n_qubits()
            )));
        }
        if !init.is_bound() {
            return Err(Error::contract("the initial-state circuit must be bound"));
        }
        if !hamiltonian.is_hermitian() {
            return Err(Error::contract("hamiltonian is not Hermitian"));
        }
        let sq = hamiltonian.checked_mul(&hamiltonian)?;
        Ok(Self {
            objective: hamiltonian.clone(),
            objective_sq: sq.clone(),
            measured: hamiltonian,
            measured_sq: sq,
            ansatz,
            init,
            noise: None,
            shots: ShotModel::off(),
            seed: 0,
        })
    }

    /// Replaces the optimized operator (e.g. a spin-penalized Hamiltonian)
    /// while keeping the measured one.
    pub fn with_objective(mut self, objective: PauliSum<f64>) -> Result<Self> {
        if objective.n_qubits() != self.measured.n_qubits() {
            return Err(Error::dim("objective and measured operators differ in width"));
        }
        if !objective.is_hermitian() {
            return Err(Error::contract("objective operator is not Hermitian"));
        }
        self.objective_sq = objective.checked_mul(&objective)?;
        self.objective = objective;
        Ok(self)
    }

    /// Gate noise; also adopts the model's seed for shot noise.
    pub fn with_noise(mut self, noise: Option<NoiseModel>) -> Result<Self> {
        if let Some(nm) = &noise {
            nm.validate()?;
            self.seed = nm.seed;
        }
        self.noise = noise.filter(|nm| !nm.is_noiseless());
        Ok(self)
    }

    pub fn with_shots(mut self, shots: ShotModel) -> Result<Self> {
        shots.validate()?;
        self.shots = shots;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.measured.n_qubits()
    }

    pub fn n_params(&self) -> usize {
        self.ansatz.n_params()
    }

    pub fn objective_operator(&self) -> &PauliSum<f64> {
        &self.objective
    }

    pub fn measured_operator(&self) -> &PauliSum<f64> {
        &self.measured
    }

    pub fn ansatz(&self) -> &Circuit {
        &self.ansatz
    }

    pub fn init(&self) -> &Circuit {
        &self.init
    }

    pub fn noise(&self) -> Option<&NoiseModel> {
        self.noise.as_ref()
    }

    pub fn shots(&self) -> &ShotModel {
        &self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The fully bound circuit: ansatz first, then the initial-state block.
    pub fn bound_circuit(&self, theta: &[f64]) -> Result<Circuit> {
        if theta.len() != self.n_params() {
            return Err(Error::contract(format!(
                "expected {} parameters, got {}",
                self.n_params(),
                theta.len()
            )));
        }
        compose_init_after_ansatz(&self.ansatz.bind(theta)?, &self.init)
    }

    /// Trial state, mixed when gate noise is on.
    pub fn state(&self, theta: &[f64]) -> Result<QuantumState<f64>> {
        let c = self.bound_circuit(theta)?;
        match &self.noise {
            Some(nm) => run_noisy(&c, 0, nm),
            None => run_pure(&c, 0),
        }
    }

    /// Energy of `op` at `theta` including shot noise drawn from `stream`.
    pub fn energy(&self, op: Operator, theta: &[f64], stream: u64) -> Result<f64> {
        let state = self.state(theta)?;
        let (h, h2) = match op {
            Operator::Objective => (&self.objective, &self.objective_sq),
            Operator::Measured => (&self.measured, &self.measured_sq),
        };
        energy_with_shots_squared(h, h2, &state, &self.shots, self.seed, stream)
    }
}

/// Single objective evaluation on shot stream 0.
pub fn objective(problem: &VqeProblem, theta: &[f64]) -> Result<f64> {
    problem.energy(Operator::Objective, theta, 0)
}

/// Objective handle that numbers its evaluations; evaluation `k` draws its
/// shot noise from stream `k`, so results depend only on call order.
pub struct Objective<'a> {
    problem: &'a VqeProblem,
    evaluations: u64,
}

impl<'a> Objective<'a> {
    pub fn new(problem: &'a VqeProblem) -> Self {
        Self {
            problem,
            evaluations: 0,
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn eval(&mut self, theta: &[f64]) -> Result<f64> {
        let stream = self.evaluations;
        self.evaluations += 1;
        self.problem.energy(Operator::Objective, theta, stream)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MitigationRecord {
    /// Noiseless energy of the reference state.
    pub e_exact_ref: f64,
    /// Noisy energy of the reference circuit (ansatz at zero).
    pub e_noisy_ref: f64,
    pub delta: f64,
    /// Noisy energy at the optimized parameters.
    pub e_vqe_raw: f64,
    pub e_mitigated: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub truncated: bool,
    pub theta: Vec<f64>,
}

impl MitigationRecord {
    pub fn from_energies(e_exact_ref: f64, e_noisy_ref: f64, e_vqe_raw: f64, opt: &ImFilResult) -> Self {
        let delta = e_noisy_ref - e_exact_ref;
        Self {
            e_exact_ref,
            e_noisy_ref,
            delta,
            e_vqe_raw,
            e_mitigated: e_vqe_raw - delta,
            iterations: opt.iterations,
            evaluations: opt.evaluations,
            truncated: opt.truncated,
            theta: opt.theta.clone(),
        }
    }

    /// `e_mitigated == e_vqe_raw - (e_noisy_ref - e_exact_ref)` bit for bit.
    pub fn identity_holds(&self) -> bool {
        self.delta == self.e_noisy_ref - self.e_exact_ref && self.e_mitigated == self.e_vqe_raw - self.delta
    }
}

/// Reference-state error mitigation around one VQE run. `reference` is the
/// state prepared by `problem.init()`: the HF determinant for REM or a
/// multireference target for MREM.
pub fn run_mrem(problem: &VqeProblem, reference: &MrTarget, cfg: &ImFilConfig) -> Result<MitigationRecord> {
    if reference.n_qubits != problem.n_qubits() {
        return Err(Error::dim("reference and hamiltonian widths differ"));
    }
    let e_exact_ref = expectation(problem.measured_operator(), &reference.to_state()?)?;
    let zero = vec![0.0; problem.n_params()];
    let e_noisy_ref = problem.energy(Operator::Measured, &zero, STREAM_NOISY_REFERENCE)?;
    let mut obj = Objective::new(problem);
    let opt = imfil_minimize(|t| obj.eval(t), &zero, cfg)?;
    let e_vqe_raw = problem.energy(Operator::Measured, &opt.theta, STREAM_FINAL_ENERGY)?;
    Ok(MitigationRecord::from_energies(
        e_exact_ref,
        e_noisy_ref,
        e_vqe_raw,
        &opt,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_ry_linear, GateOp};

    fn toy() -> VqeProblem {
        let h = PauliSum::from_labels(&[(0.5, "ZI"), (-0.3, "IZ"), (0.2, "XX")]).unwrap();
        let init = Circuit::from_ops(2, [GateOp::x(0)]).unwrap();
        VqeProblem::new(h, build_ry_linear(2, 1).unwrap(), init).unwrap()
    }

    #[test]
    fn wrong_parameter_count() {
        assert!(matches!(objective(&toy(), &[0.0]), Err(Error::Contract(_))));
    }

    #[test]
    fn zero_angles_give_the_initial_state() {
        // init |01>: <ZI> = +1 on qubit 1, <IZ> = -1 on qubit 0
        let e = objective(&toy(), &[0.0; 4]).unwrap();
        assert!((e - 0.8).abs() < 1e-14);
    }

    #[test]
    fn synthetic_record_identity() {
        let opt = ImFilResult {
            theta: vec![],
            f_min: 0.0,
            trace: vec![],
            iterations: 0,
            evaluations: 0,
            truncated: false,
        };
        let r = MitigationRecord::from_energies(-75.6069, -75.5162, -75.5162, &opt);
        assert!((r.delta - 0.0907).abs() < 1e-12);
        assert!((r.e_mitigated + 75.6069).abs() < 1e-12);
        assert!(r.identity_holds());
    }

    #[test]
    fn width_mismatch() {
        let h = PauliSum::from_labels(&[(1.0, "ZII")]).unwrap();
        assert!(VqeProblem::new(h, build_ry_linear(2, 1).unwrap(), Circuit::new(2)).is_err());
    }
}
