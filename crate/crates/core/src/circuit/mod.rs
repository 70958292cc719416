//! Gate IR, exact gate matrices, decompositions and resource counts.
//!
//! Multi-qubit matrices index their sub-space with the *first* listed qubit
//! as the most significant bit. `G[a, b]` therefore maps `|a=0, b=1>` to
//! `cos(t/2)|01> + sin(t/2)|10>`, and `G2[a, b, c, d]` mixes the sub-states
//! `|0011>` and `|1100>`. Controlled gates list the control first.

mod ansatz;
mod decompose;
mod gates;
mod json;

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ansatz::{build_ry_linear, compose_init_after_ansatz};
pub use decompose::{count_resources, decompose, lower, ResourceCount};
pub use gates::{gate_derivative, gate_unitary, max_phase_deviation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    RY,
    CX,
    CRY,
    G,
    CG,
    G2,
    CG2,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::H,
        GateKind::RY,
        GateKind::CX,
        GateKind::CRY,
        GateKind::G,
        GateKind::CG,
        GateKind::G2,
        GateKind::CG2,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::H | GateKind::RY => 1,
            GateKind::CX | GateKind::CRY | GateKind::G => 2,
            GateKind::CG => 3,
            GateKind::G2 => 4,
            GateKind::CG2 => 5,
        }
    }

    pub fn takes_angle(self) -> bool {
        !matches!(self, GateKind::X | GateKind::H | GateKind::CX)
    }

    /// Givens-family gates that [`decompose`] expands.
    pub fn is_composite(self) -> bool {
        matches!(self, GateKind::G | GateKind::CG | GateKind::G2 | GateKind::CG2)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::RY => "RY",
            GateKind::CX => "CX",
            GateKind::CRY => "CRY",
            GateKind::G => "G",
            GateKind::CG => "CG",
            GateKind::G2 => "G2",
            GateKind::CG2 => "CG2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rotation angle in radians, either concrete or `mult * theta[slot]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Bound(f64),
    Param { slot: usize, mult: Ratio<i64> },
}

impl Angle {
    pub fn param(slot: usize) -> Self {
        Angle::Param {
            slot,
            mult: Ratio::from_integer(1),
        }
    }

    pub fn scaled_param(slot: usize, numer: i64, denom: i64) -> Self {
        Angle::Param {
            slot,
            mult: Ratio::new(numer, denom),
        }
    }

    /// Multiplies by an exact rational factor.
    pub fn scale(self, factor: Ratio<i64>) -> Self {
        match self {
            Angle::Bound(v) => Angle::Bound(v * ratio_to_f64(factor)),
            Angle::Param { slot, mult } => Angle::Param {
                slot,
                mult: mult * factor,
            },
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Angle::Bound(v) => Some(v),
            Angle::Param { .. } => None,
        }
    }

    pub fn slot(self) -> Option<usize> {
        match self {
            Angle::Bound(_) => None,
            Angle::Param { slot, .. } => Some(slot),
        }
    }

    fn bind(self, theta: &[f64]) -> Result<Self> {
        match self {
            Angle::Bound(_) => Ok(self),
            Angle::Param { slot, mult } => theta
                .get(slot)
                .map(|t| Angle::Bound(t * ratio_to_f64(mult)))
                .ok_or(Error::UnboundParameter { slot }),
        }
    }
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    qubits: Vec<usize>,
    angle: Option<Angle>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: Vec<usize>, angle: Option<Angle>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::contract(format!(
                "{kind} takes {} qubits, got {}",
                kind.arity(),
                qubits.len()
            )));
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::contract(format!("{kind} repeats qubit {q}")));
            }
        }
        match (kind.takes_angle(), angle.is_some()) {
            (true, false) => return Err(Error::contract(format!("{kind} needs an angle"))),
            (false, true) => return Err(Error::contract(format!("{kind} takes no angle"))),
            _ => {}
        }
        Ok(Self { kind, qubits, angle })
    }

    fn fixed(kind: GateKind, qubits: Vec<usize>) -> Self {
        Self::new(kind, qubits, None).expect("well-formed fixed gate")
    }

    fn rotation(kind: GateKind, qubits: Vec<usize>, angle: Angle) -> Self {
        Self::new(kind, qubits, Some(angle)).expect("well-formed rotation")
    }

    pub fn x(q: usize) -> Self {
        Self::fixed(GateKind::X, vec![q])
    }

    pub fn h(q: usize) -> Self {
        Self::fixed(GateKind::H, vec![q])
    }

    pub fn ry(q: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::RY, vec![q], angle)
    }

    /// Panics if `control == target`.
    pub fn cx(control: usize, target: usize) -> Self {
        Self::fixed(GateKind::CX, vec![control, target])
    }

    pub fn cry(control: usize, target: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::CRY, vec![control, target], angle)
    }

    pub fn g(a: usize, b: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::G, vec![a, b], angle)
    }

    pub fn cg(control: usize, a: usize, b: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::CG, vec![control, a, b], angle)
    }

    pub fn g2(targets: [usize; 4], angle: Angle) -> Self {
        Self::rotation(GateKind::G2, targets.to_vec(), angle)
    }

    pub fn cg2(control: usize, targets: [usize; 4], angle: Angle) -> Self {
        let mut qubits = vec![control];
        qubits.extend(targets);
        Self::rotation(GateKind::CG2, qubits, angle)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn angle(&self) -> Option<Angle> {
        self.angle
    }

    pub fn is_bound(&self) -> bool {
        !matches!(self.angle, Some(Angle::Param { .. }))
    }

    pub fn max_qubit(&self) -> usize {
        self.qubits.iter().copied().max().unwrap_or(0)
    }

    pub fn bind(&self, theta: &[f64]) -> Result<Self> {
        Ok(Self {
            angle: self.angle.map(|a| a.bind(theta)).transpose()?,
            ..self.clone()
        })
    }

    pub(crate) fn with_angle(&self, angle: Angle) -> Self {
        Self {
            angle: Some(angle),
            ..self.clone()
        }
    }
}

/// An ordered gate list on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
    n_params: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
            n_params: 0,
        }
    }

    pub fn from_ops(n_qubits: usize, ops: impl IntoIterator<Item = GateOp>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for op in ops {
            c.push(op)?;
        }
        Ok(c)
    }

    /// Appends a gate; symbolic slots grow `n_params` to cover them.
    pub fn push(&mut self, op: GateOp) -> Result<()> {
        if op.max_qubit() >= self.n_qubits {
            return Err(Error::dim(format!(
                "{} on qubit {} of a {}-qubit circuit",
                op.kind,
                op.max_qubit(),
                self.n_qubits
            )));
        }
        if let Some(slot) = op.angle.and_then(Angle::slot) {
            self.n_params = self.n_params.max(slot + 1);
        }
        self.ops.push(op);
        Ok(())
    }

    /// Declares extra, possibly unused, parameter slots.
    pub fn with_n_params(mut self, n_params: usize) -> Result<Self> {
        if n_params < self.n_params {
            return Err(Error::contract(format!(
                "circuit uses {} slots, cannot shrink to {n_params}",
                self.n_params
            )));
        }
        self.n_params = n_params;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_bound(&self) -> bool {
        self.ops.iter().all(GateOp::is_bound)
    }

    /// Substitutes `theta` into every symbolic angle.
    pub fn bind(&self, theta: &[f64]) -> Result<Self> {
        if theta.len() != self.n_params {
            return Err(Error::contract(format!(
                "circuit has {} parameters, got {}",
                self.n_params,
                theta.len()
            )));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().map(|op| op.bind(theta)).collect::<Result<_>>()?,
            n_params: 0,
        })
    }

    /// Concatenation: `self` runs first. Symbolic slots of `other` are
    /// shifted past those of `self`.
    pub fn then(&self, other: &Circuit) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::dim(format!(
                "concatenating {}- and {}-qubit circuits",
                self.n_qubits, other.n_qubits
            )));
        }
        let shift = self.n_params;
        let mut out = self.clone();
        for op in &other.ops {
            let op = match op.angle {
                Some(Angle::Param { slot, mult }) => op.with_angle(Angle::Param {
                    slot: slot + shift,
                    mult,
                }),
                _ => op.clone(),
            };
            out.ops.push(op);
        }
        out.n_params = shift + other.n_params;
        Ok(out)
    }
}
