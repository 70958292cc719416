//! Multireference-state error mitigation (MREM) for variational quantum
//! eigensolvers.
//!
//! The crate covers the whole desk-scale workflow:
//!
//! * [`pauli`]: Pauli strings in symplectic form, Pauli sums, dense
//!   realization, expectation values and exact diagonalization.
//! * [`fermion`]: Jordan-Wigner images of excitation operators, the
//!   Hartree-Fock determinant and the total-spin operator.
//! * [`taper`]: Z2 symmetry detection and qubit tapering.
//! * [`circuit`]: the gate IR (including Givens rotations), decompositions,
//!   resource counts and the RY-linear hardware-efficient ansatz.
//! * [`sim`]: statevector and density-matrix simulation with gate noise and
//!   a normal-approximation shot-noise model.
//! * [`stateprep`]: multireference target compilation onto Givens templates.
//! * [`driver`]: VQE objective, implicit filtering, REM/MREM and PES sweeps.
//!
//! Basis states are indexed with qubit 0 as the least significant bit, so a
//! bitstring label reads right to left: `"00001"` has only qubit 0 set.
//!
//! The numerical core is generic over the real scalar type ([`Real`]);
//! the aliases below pin the `f64` instantiation used by the driver and CLI.

pub mod circuit;
pub mod driver;
pub mod error;
pub mod fermion;
pub mod pauli;
pub mod scalar;
pub mod sim;
pub mod stateprep;
pub mod taper;

pub use error::{Error, Result};
pub use scalar::Real;

pub use circuit::{Angle, Circuit, GateKind, GateOp};
pub use driver::{ImFilConfig, MitigationRecord, VqeProblem};
pub use fermion::{OrbitalLayout, SpinPenaltyConfig};
pub use sim::{NoiseModel, ShotModel};
pub use stateprep::{MrTarget, PrepTemplate};
pub use taper::SymmetrySet;

/// Complex amplitude type for the `f64` instantiation.
pub type C64 = num_complex::Complex<f64>;

pub type PauliTerm64 = pauli::PauliTerm<f64>;
pub type PauliSum64 = pauli::PauliSum<f64>;
pub type State64 = sim::QuantumState<f64>;
pub type SymmetrySet64 = taper::SymmetrySet<f64>;

pub type PauliTerm32 = pauli::PauliTerm<f32>;
pub type PauliSum32 = pauli::PauliSum<f32>;
pub type State32 = sim::QuantumState<f32>;

/// Basis-state index width used for every register. Bit `q` of an index is
/// the occupation of qubit `q`.
pub type Basis = u64;

/// Largest register handled by dense matrices and exact diagonalization.
pub const DENSE_QUBIT_LIMIT: usize = 12;
/// Largest register for density-matrix simulation.
pub const DENSITY_QUBIT_LIMIT: usize = 10;
/// Largest register for statevector simulation.
pub const STATEVECTOR_QUBIT_LIMIT: usize = 24;
/// Largest register accepted by the GF(2) symmetry search.
pub const SYMMETRY_QUBIT_LIMIT: usize = 24;
