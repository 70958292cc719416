//! Pauli strings and Pauli sums.
//!
//! A term is stored in symplectic form: bit `q` of `x_mask` / `z_mask` marks an
//! X / Z component on qubit `q`, both bits together mark Y. The operator of a
//! term with masks `(x, z)` is `i^{|x & z|} X^x Z^z`, which makes every string
//! Hermitian and lets `Y = iXZ` fall out of the mask arithmetic.

mod dense;
mod sum;
mod term;
mod text;

pub use dense::{exact_ground_state, expectation, expectation_raw, to_dense};
pub use sum::PauliSum;
pub use term::PauliTerm;
pub use text::{parse_pauli_sum, read_pauli_sum};

/// Coefficients below this magnitude are dropped during normalization.
pub const DROP_TOLERANCE: f64 = 1e-14;
/// Largest imaginary coefficient tolerated on a Hermitian sum.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
