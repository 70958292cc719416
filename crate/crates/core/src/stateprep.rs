//! Multireference state preparation on Givens-rotation templates.
//!
//! A template is a circuit with symbolic slots that acts on the reference
//! determinant. Angles are solved by Levenberg-Marquardt on the map from
//! slot angles to the amplitudes of the target determinants, with an
//! analytic Jacobian; a closed form for pure rotation cascades is the
//! fallback.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::circuit::{gate_derivative, gate_unitary, ratio_to_f64, Angle, Circuit, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::sim::{apply_gate_pure, kernel, run_pure, QuantumState};
use crate::Basis;

pub const MAX_COMPONENTS: usize = 4;
const MAX_ITERATIONS: usize = 200;
const SOLVE_TOLERANCE: f64 = 1e-11;

pub fn parse_bits(s: &str, width: usize) -> Result<Basis> {
    let s = s.trim();
    if s.len() != width || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Config(format!(
            "bitstring {s:?} is not a {width}-character 0/1 string"
        )));
    }
    Ok(Basis::from_str_radix(s, 2).expect("validated binary string"))
}

pub fn format_bits(b: Basis, width: usize) -> String {
    (0..width)
        .rev()
        .map(|q| if b >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Truncated multireference target: the reference determinant plus a short
/// list of `(determinant, coefficient)` pairs, reference first.
#[derive(Clone, Debug, PartialEq)]
pub struct MrTarget {
    pub n_qubits: usize,
    pub reference: Basis,
    pub components: Vec<(Basis, f64)>,
    /// Tapered registers need not conserve Hamming weight.
    pub tapered: bool,
}

#[derive(Serialize, Deserialize)]
struct ComponentRecord {
    det: String,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct TargetRecord {
    n_qubits: usize,
    reference: String,
    components: Vec<ComponentRecord>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    tapered: bool,
}

impl MrTarget {
    pub fn new(n_qubits: usize, reference: Basis, components: Vec<(Basis, f64)>) -> Result<Self> {
        let t = Self {
            n_qubits,
            reference,
            components,
            tapered: false,
        };
        t.validate()?;
        Ok(t)
    }

    /// The determinant alone.
    pub fn single(n_qubits: usize, det: Basis) -> Result<Self> {
        Self::new(n_qubits, det, vec![(det, 1.0)])
    }

    pub fn tapered(mut self, tapered: bool) -> Self {
        self.tapered = tapered;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > 63 {
            return Err(Error::Config(format!("target width {} out of range", self.n_qubits)));
        }
        if self.components.is_empty() || self.components.len() > MAX_COMPONENTS {
            return Err(Error::Config(format!(
                "{} components, supported range is 1..={MAX_COMPONENTS}",
                self.components.len()
            )));
        }
        if self.components[0].0 != self.reference {
            return Err(Error::Config("the reference must be the first component".into()));
        }
        let limit = 1u64 << self.n_qubits;
        let mut seen = BTreeSet::new();
        for (det, c) in &self.components {
            if *det >= limit {
                return Err(Error::Config(format!("determinant {det:b} exceeds the register")));
            }
            if !seen.insert(*det) {
                return Err(Error::Config(format!("determinant {det:b} listed twice")));
            }
            if !c.is_finite() {
                return Err(Error::Config("non-finite coefficient".into()));
            }
        }
        let norm: f64 = self.components.iter().map(|(_, c)| c * c).sum();
        if (norm - 1.0).abs() > 1e-3 {
            return Err(Error::Config(format!("sum of squared coefficients is {norm:.6}")));
        }
        Ok(())
    }

    /// Unit-norm coefficients with a non-negative reference coefficient.
    pub fn normalized_components(&self) -> Vec<(Basis, f64)> {
        let norm = self.components.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
        let sign = if self.components[0].1 < 0.0 { -1.0 } else { 1.0 };
        self.components.iter().map(|(d, c)| (*d, sign * c / norm)).collect()
    }

    pub fn coefficient_of(&self, det: Basis) -> f64 {
        self.normalized_components()
            .iter()
            .find(|(d, _)| *d == det)
            .map_or(0.0, |(_, c)| *c)
    }

    /// The normalized target as a statevector.
    pub fn to_state(&self) -> Result<QuantumState<f64>> {
        let mut amps = vec![Complex::zero(); 1 << self.n_qubits];
        for (d, c) in self.normalized_components() {
            amps[d as usize] = Complex::new(c, 0.0);
        }
        QuantumState::from_amplitudes(self.n_qubits, amps)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: TargetRecord = serde_json::from_str(text)?;
        let n = rec.n_qubits;
        let reference = parse_bits(&rec.reference, n)?;
        let components = rec
            .components
            .iter()
            .map(|c| Ok((parse_bits(&c.det, n)?, c.coeff)))
            .collect::<Result<Vec<_>>>()?;
        let t = Self {
            n_qubits: n,
            reference,
            components,
            tapered: rec.tapered,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        let rec = TargetRecord {
            n_qubits: self.n_qubits,
            reference: format_bits(self.reference, self.n_qubits),
            components: self
                .components
                .iter()
                .map(|(d, c)| ComponentRecord {
                    det: format_bits(*d, self.n_qubits),
                    coeff: *c,
                })
                .collect(),
            tapered: self.tapered,
        };
        serde_json::to_string_pretty(&rec).expect("target serializes")
    }
}

/// A preparation template: a circuit over {X, CX, G, CG, G2, CG2} whose
/// symbolic slots are the rotation angles, run on the reference.
#[derive(Clone, Debug, PartialEq)]
pub struct PrepTemplate {
    circuit: Circuit,
}

impl PrepTemplate {
    pub fn new(circuit: Circuit) -> Result<Self> {
        for op in circuit.ops() {
            let allowed = matches!(
                op.kind(),
                GateKind::X | GateKind::CX | GateKind::G | GateKind::CG | GateKind::G2 | GateKind::CG2
            );
            if !allowed {
                return Err(Error::Config(format!("{} is not a template gate", op.kind())));
            }
        }
        Ok(Self { circuit })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(Circuit::from_json(text)?)
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn slot_count(&self) -> usize {
        self.circuit.n_params()
    }
}

fn plane_partner(op: &GateOp, b: Basis) -> Option<Basis> {
    let q = op.qubits();
    let sub: usize = q.iter().fold(0, |acc, &qq| acc << 1 | (b >> qq & 1) as usize);
    let (i0, i1) = match op.kind() {
        GateKind::G => (1, 2),
        GateKind::CG => (5, 6),
        GateKind::G2 => (3, 12),
        GateKind::CG2 => (19, 28),
        _ => return None,
    };
    let other = if sub == i0 {
        i1
    } else if sub == i1 {
        i0
    } else {
        return None;
    };
    let k = q.len();
    let mut out = b;
    for (t, &qq) in q.iter().enumerate() {
        let bit = (other >> (k - 1 - t) & 1) as Basis;
        out = (out & !(1 << qq)) | bit << qq;
    }
    Some(out)
}

/// Determinants reachable from the reference for generic angles.
pub fn reachable_support(template: &PrepTemplate, reference: Basis) -> BTreeSet<Basis> {
    let mut support = BTreeSet::from([reference]);
    for op in template.circuit.ops() {
        let q = op.qubits();
        support = match op.kind() {
            GateKind::X => support.iter().map(|b| b ^ 1 << q[0]).collect(),
            GateKind::CX => support
                .iter()
                .map(|b| if b >> q[0] & 1 == 1 { b ^ 1 << q[1] } else { *b })
                .collect(),
            _ => {
                let mut next = support.clone();
                next.extend(support.iter().filter_map(|b| plane_partner(op, *b)));
                next
            }
        };
    }
    support
}

/// Amplitudes on `dets` and their Jacobian with respect to the slots.
fn amplitudes_and_jacobian(
    template: &PrepTemplate,
    reference: Basis,
    theta: &[f64],
    dets: &[Basis],
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let c = &template.circuit;
    let bound = c.bind(theta)?;
    let mut states: Vec<Vec<Complex<f64>>> = Vec::with_capacity(c.len() + 1);
    let start = QuantumState::<f64>::basis(c.n_qubits(), reference)?;
    states.push(start.amplitudes().expect("pure").to_vec());
    for op in bound.ops() {
        let mut next = states.last().expect("non-empty").clone();
        apply_gate_pure(&mut next, op)?;
        states.push(next);
    }
    let last = states.last().expect("non-empty");
    let amps = DVector::from_iterator(dets.len(), dets.iter().map(|d| last[*d as usize].re));
    let mut jac = DMatrix::zeros(dets.len(), c.n_params());
    for (k, (op, bop)) in c.ops().iter().zip(bound.ops()).enumerate() {
        let Some(Angle::Param { slot, mult }) = op.angle() else {
            continue;
        };
        let mut v = states[k].clone();
        kernel::apply_matrix(&mut v, bop.qubits(), &gate_derivative::<f64>(bop)?);
        for later in &bound.ops()[k + 1..] {
            let u = gate_unitary::<f64>(later)?;
            kernel::apply_matrix(&mut v, later.qubits(), &u);
        }
        let m = ratio_to_f64(mult);
        for (row, d) in dets.iter().enumerate() {
            jac[(row, slot)] += m * v[*d as usize].re;
        }
    }
    Ok((amps, jac))
}

fn check_solvable(target: &MrTarget, template: &PrepTemplate) -> Result<()> {
    target.validate()?;
    if template.circuit.n_qubits() != target.n_qubits {
        return Err(Error::dim(format!(
            "{}-qubit template for a {}-qubit target",
            template.circuit.n_qubits(),
            target.n_qubits
        )));
    }
    if template.slot_count() + 1 > target.components.len() {
        return Err(Error::TemplateMismatch(format!(
            "{} slots for {} components",
            template.slot_count(),
            target.components.len()
        )));
    }
    let reach = reachable_support(template, target.reference);
    if let Some((d, _)) = target.normalized_components().iter().find(|(d, _)| !reach.contains(d)) {
        return Err(Error::TemplateMismatch(format!(
            "determinant {} is unreachable from the reference",
            format_bits(*d, target.n_qubits)
        )));
    }
    Ok(())
}

fn max_residual(amps: &DVector<f64>, coeffs: &DVector<f64>) -> f64 {
    (amps - coeffs).amax()
}

fn levenberg_marquardt(target: &MrTarget, template: &PrepTemplate) -> Result<(Vec<f64>, f64, usize)> {
    let comps = target.normalized_components();
    let dets: Vec<Basis> = comps.iter().map(|(d, _)| *d).collect();
    let coeffs = DVector::from_iterator(comps.len(), comps.iter().map(|(_, c)| *c));
    let n = template.slot_count();
    let mut theta = vec![0.0; n];
    let (mut amps, mut jac) = amplitudes_and_jacobian(template, target.reference, &theta, &dets)?;
    let mut cost = (&amps - &coeffs).norm_squared();
    let mut mu = 1e-3;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && max_residual(&amps, &coeffs) > SOLVE_TOLERANCE {
        iterations += 1;
        let r = &amps - &coeffs;
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * &r;
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for i in 0..n {
                a[(i, i)] += mu * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                mu *= 4.0;
                continue;
            };
            let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t + s).collect();
            let (ta, tj) = amplitudes_and_jacobian(template, target.reference, &trial, &dets)?;
            let tc = (&ta - &coeffs).norm_squared();
            if tc < cost {
                theta = trial;
                amps = ta;
                jac = tj;
                cost = tc;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    Ok((theta, max_residual(&amps, &coeffs), iterations))
}

/// Closed form for templates where every slot, alone at `pi`, moves the
/// reference onto its own target determinant: amplitude of the `k`-th
/// determinant is `s_k sin(t_k / 2) prod_{j<k} cos(t_j / 2)`.
fn cascade_closed_form(target: &MrTarget, template: &PrepTemplate) -> Option<Vec<f64>> {
    let n = template.slot_count();
    let mut order: Vec<usize> = Vec::new();
    for op in template.circuit.ops() {
        if let Some(slot) = op.angle().and_then(Angle::slot) {
            if !order.contains(&slot) {
                order.push(slot);
            }
        }
    }
    let x_layer = reference_layer(target.n_qubits, target.reference);
    let mut theta = vec![0.0; n];
    let mut remaining = 1.0f64;
    let mut used = BTreeSet::from([target.reference]);
    for &slot in &order {
        let mut probe = vec![0.0; n];
        probe[slot] = std::f64::consts::PI;
        let circuit = x_layer.then(&template.circuit.bind(&probe).ok()?).ok()?;
        let state = run_pure::<f64>(&circuit, 0).ok()?;
        let amps = state.amplitudes()?;
        let (det, amp) = amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if (amp.norm() - 1.0).abs() > 1e-9 || !used.insert(det as Basis) {
            return None;
        }
        let sign = amp.re.signum();
        let ratio = sign * target.coefficient_of(det as Basis) / remaining;
        if ratio.abs() > 1.0 + 1e-12 {
            return None;
        }
        let half = ratio.clamp(-1.0, 1.0).asin();
        theta[slot] = 2.0 * half;
        remaining *= half.cos();
    }
    Some(theta)
}

/// Angles for `template` whose prepared state matches the renormalized
/// target amplitudes.
pub fn solve_parameters(target: &MrTarget, template: &PrepTemplate) -> Result<Vec<f64>> {
    check_solvable(target, template)?;
    let (theta, residual, iterations) = levenberg_marquardt(target, template)?;
    if residual <= 1e-9 {
        return Ok(theta);
    }
    if let Some(closed) = cascade_closed_form(target, template) {
        let comps = target.normalized_components();
        let dets: Vec<Basis> = comps.iter().map(|(d, _)| *d).collect();
        let coeffs = DVector::from_iterator(comps.len(), comps.iter().map(|(_, c)| *c));
        let (amps, _) = amplitudes_and_jacobian(template, target.reference, &closed, &dets)?;
        if max_residual(&amps, &coeffs) <= 1e-9 {
            return Ok(closed);
        }
    }
    Err(Error::Solver { iterations, residual })
}

/// X gates preparing `reference` from `|0...0>`.
pub fn reference_layer(n_qubits: usize, reference: Basis) -> Circuit {
    let ops = (0..n_qubits).filter(|q| reference >> q & 1 == 1).map(GateOp::x);
    Circuit::from_ops(n_qubits, ops).expect("qubits inside the register")
}

/// Bound circuit `X layer + template(theta)` acting on `|0...0>`.
pub fn bind_template(target_reference: Basis, template: &PrepTemplate, theta: &[f64]) -> Result<Circuit> {
    let n = template.circuit.n_qubits();
    reference_layer(n, target_reference).then(&template.circuit.bind(theta)?)
}

/// Solves the angles and returns the bound preparation circuit.
pub fn compile_state(target: &MrTarget, template: &PrepTemplate) -> Result<(Circuit, Vec<f64>)> {
    let theta = solve_parameters(target, template)?;
    Ok((bind_template(target.reference, template, &theta)?, theta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "weight", rename_all = "snake_case")]
pub enum WeightCheck {
    Uniform(u32),
    Mixed,
    /// Tapered register: weights need not agree.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentDeviation {
    pub det: String,
    pub target: f64,
    pub actual: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrepReport {
    pub components: Vec<ComponentDeviation>,
    pub max_amplitude_error: f64,
    /// Probability outside the target support.
    pub leakage: f64,
    pub weight_check: WeightCheck,
}

impl PrepReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_amplitude_error <= tol && self.leakage <= tol && self.weight_check != WeightCheck::Mixed
    }
}

/// Runs `c` on `|0...0>` and compares with the renormalized target. The
/// global sign is fixed by a non-negative reference amplitude.
pub fn verify_preparation(c: &Circuit, target: &MrTarget) -> Result<PrepReport> {
    if c.n_qubits() != target.n_qubits {
        return Err(Error::dim("circuit and target widths differ"));
    }
    let state = run_pure::<f64>(c, 0)?;
    let amps = state.amplitudes().expect("pure run");
    let r = amps[target.reference as usize];
    let phase = if r.norm() > 1e-12 {
        r.conj() / r.norm()
    } else {
        Complex::new(1.0, 0.0)
    };
    let comps = target.normalized_components();
    let mut components = Vec::new();
    let mut inside = 0.0;
    for (d, coeff) in &comps {
        let actual = (amps[*d as usize] * phase).re;
        inside += amps[*d as usize].norm_sqr();
        components.push(ComponentDeviation {
            det: format_bits(*d, target.n_qubits),
            target: *coeff,
            actual,
            deviation: (actual - coeff).abs(),
        });
    }
    let weight_check = if target.tapered {
        WeightCheck::Skipped
    } else {
        let weights: BTreeSet<u32> = comps.iter().map(|(d, _)| d.count_ones()).collect();
        match weights.iter().next() {
            Some(w) if weights.len() == 1 => WeightCheck::Uniform(*w),
            _ => WeightCheck::Mixed,
        }
    };
    Ok(PrepReport {
        max_amplitude_error: components.iter().map(|c| c.deviation).fold(0.0, f64::max),
        components,
        leakage: (1.0 - inside).max(0.0),
        weight_check,
    })
}
