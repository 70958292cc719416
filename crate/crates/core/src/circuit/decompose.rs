use num_rational::Ratio;

use super::{Angle, Circuit, GateKind, GateOp};
use crate::error::{Error, Result};

enum Step {
    Cx(usize, usize),
    H(usize),
    /// RY by `sign * theta / 8`.
    Ry(usize, i64),
}

/// Double-excitation Givens rotation on targets `r[0..4]`: 14 CX, 8 RY, 6 H.
const G2_STEPS: [Step; 28] = {
    use Step::*;
    [
        Cx(2, 3),
        Cx(0, 2),
        H(0),
        H(3),
        Cx(0, 1),
        Cx(2, 3),
        Ry(0, -1),
        Ry(1, 1),
        Cx(0, 3),
        H(3),
        Cx(3, 1),
        Ry(0, -1),
        Ry(1, 1),
        Cx(2, 1),
        Cx(2, 0),
        Ry(0, 1),
        Ry(1, -1),
        Cx(3, 1),
        H(3),
        Cx(0, 3),
        Ry(0, 1),
        Ry(1, -1),
        Cx(0, 1),
        Cx(2, 0),
        H(0),
        H(3),
        Cx(0, 2),
        Cx(2, 3),
    ]
};

fn rotation(control: Option<usize>, target: usize, angle: Angle) -> GateOp {
    match control {
        Some(c) => GateOp::cry(c, target, angle),
        None => GateOp::ry(target, angle),
    }
}

fn givens_ops(control: Option<usize>, a: usize, b: usize, angle: Angle) -> Vec<GateOp> {
    let half = angle.scale(Ratio::new(1, 2));
    vec![
        GateOp::h(b),
        GateOp::cx(b, a),
        rotation(control, a, half),
        rotation(control, b, half),
        GateOp::cx(b, a),
        GateOp::h(b),
    ]
}

fn double_givens_ops(control: Option<usize>, r: &[usize], angle: Angle) -> Vec<GateOp> {
    G2_STEPS
        .iter()
        .map(|step| match *step {
            Step::Cx(c, t) => GateOp::cx(r[c], r[t]),
            Step::H(q) => GateOp::h(r[q]),
            Step::Ry(q, sign) => rotation(control, r[q], angle.scale(Ratio::new(sign, 8))),
        })
        .collect()
}

/// Two-CX, two-RY expansion of a controlled RY.
fn cry_ops(control: usize, target: usize, angle: Angle) -> Vec<GateOp> {
    vec![
        GateOp::ry(target, angle.scale(Ratio::new(1, 2))),
        GateOp::cx(control, target),
        GateOp::ry(target, angle.scale(Ratio::new(-1, 2))),
        GateOp::cx(control, target),
    ]
}

pub(crate) fn decompose_ops(op: &GateOp) -> Result<Vec<GateOp>> {
    let q = op.qubits();
    let angle = op.angle();
    match (op.kind(), angle) {
        (GateKind::CRY, Some(a)) => Ok(cry_ops(q[0], q[1], a)),
        (GateKind::G, Some(a)) => Ok(givens_ops(None, q[0], q[1], a)),
        (GateKind::CG, Some(a)) => Ok(givens_ops(Some(q[0]), q[1], q[2], a)),
        (GateKind::G2, Some(a)) => Ok(double_givens_ops(None, q, a)),
        (GateKind::CG2, Some(a)) => Ok(double_givens_ops(Some(q[0]), &q[1..], a)),
        (kind, _) => Err(Error::contract(format!("{kind} has no decomposition"))),
    }
}

/// Expands a Givens-family gate over {X, H, RY, CX, CRY}, or a CRY over
/// {RY, CX}. Symbolic angles stay
/// symbolic with rational multipliers. The result acts on `max qubit + 1`
/// qubits with the original indices.
pub fn decompose(op: &GateOp) -> Result<Circuit> {
    let ops = decompose_ops(op)?;
    let mut c = Circuit::from_ops(op.max_qubit() + 1, ops)?;
    if let Some(slot) = op.angle().and_then(Angle::slot) {
        let n = c.n_params().max(slot + 1);
        c = c.with_n_params(n)?;
    }
    Ok(c)
}

/// Rewrites a circuit over {X, H, RY, CX}.
pub fn lower(c: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(c.n_qubits());
    let mut stack: Vec<GateOp> = Vec::new();
    for op in c.ops() {
        stack.push(op.clone());
        while let Some(op) = stack.pop() {
            let expanded = match op.kind() {
                k if k.is_composite() || k == GateKind::CRY => decompose_ops(&op)?,
                _ => {
                    out.push(op)?;
                    continue;
                }
            };
            stack.extend(expanded.into_iter().rev());
        }
    }
    out.with_n_params(c.n_params())
}

/// Gate counts by arity. `n_multi` collects undecomposed gates on three or
/// more qubits and is always 0 when composites are decomposed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ResourceCount {
    pub n1: usize,
    pub n2: usize,
    pub n_multi: usize,
}

impl std::ops::Add for ResourceCount {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            n1: self.n1 + o.n1,
            n2: self.n2 + o.n2,
            n_multi: self.n_multi + o.n_multi,
        }
    }
}

/// Single- and two-qubit gate counts. With `decompose_composites`, Givens
/// gates are counted through their expansions and CRY as 2 CX + 2 RY.
pub fn count_resources(c: &Circuit, decompose_composites: bool) -> ResourceCount {
    let mut count = ResourceCount::default();
    if decompose_composites {
        let lowered = lower(c).expect("lowering a valid circuit");
        for op in lowered.ops() {
            match op.kind().arity() {
                1 => count.n1 += 1,
                _ => count.n2 += 1,
            }
        }
    } else {
        for op in c.ops() {
            match op.kind().arity() {
                1 => count.n1 += 1,
                2 => count.n2 += 1,
                _ => count.n_multi += 1,
            }
        }
    }
    count
}
