use super::{Angle, Circuit, GateOp};
use crate::error::{Error, Result};

/// RY-linear hardware-efficient ansatz: `layers + 1` RY columns separated
/// by ascending CX chains `0->1, 1->2, ...`. Slot `k * n + q` drives the RY
/// on qubit `q` in column `k`.
pub fn build_ry_linear(n_qubits: usize, layers: usize) -> Result<Circuit> {
    if n_qubits < 2 || layers < 1 {
        return Err(Error::contract(format!(
            "RY-linear ansatz needs n_qubits >= 2 and layers >= 1, got ({n_qubits}, {layers})"
        )));
    }
    let mut c = Circuit::new(n_qubits);
    for column in 0..=layers {
        if column > 0 {
            for q in 0..n_qubits - 1 {
                c.push(GateOp::cx(q, q + 1))?;
            }
        }
        for q in 0..n_qubits {
            c.push(GateOp::ry(q, Angle::param(column * n_qubits + q)))?;
        }
    }
    Ok(c)
}

/// `U_init U_ansatz`: the ansatz acts on the register first.
pub fn compose_init_after_ansatz(ansatz: &Circuit, init: &Circuit) -> Result<Circuit> {
    ansatz.then(init)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::count_resources;

    #[test]
    fn hea_counts() {
        for (n, l, n1, n2) in [(5, 5, 30, 20), (8, 5, 48, 35), (8, 20, 168, 140)] {
            let c = build_ry_linear(n, l).unwrap();
            let r = count_resources(&c, true);
            assert_eq!((r.n1, r.n2), (n1, n2));
            assert_eq!(c.n_params(), (l + 1) * n);
        }
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(build_ry_linear(1, 3).is_err());
        assert!(build_ry_linear(4, 0).is_err());
    }

    #[test]
    fn width_mismatch() {
        let a = build_ry_linear(3, 1).unwrap();
        assert!(matches!(
            compose_init_after_ansatz(&a, &Circuit::new(4)),
            Err(Error::Dimension(_))
        ));
    }
}
