//! Checks of the shipped reference tables against the library.

use std::fmt;
use std::path::Path;

use mrem::circuit::{build_ry_linear, count_resources, decompose, GateOp};
use mrem::sim::run_pure;
use mrem::stateprep::{bind_template, parse_bits, reference_layer, solve_parameters, MrTarget, PrepTemplate};
use mrem::{Angle, Circuit, GateKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const ENERGY_TOLERANCE: f64 = 1.5e-4;
pub const AMPLITUDE_TOLERANCE: f64 = 5e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    /// Informational rows are reported but never fail the run.
    pub informational: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FixtureReport {
    pub checks: Vec<Check>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && !c.informational)
    }

    pub fn group(&self, group: &str) -> impl Iterator<Item = &Check> {
        let group = group.to_owned();
        self.checks.iter().filter(move |c| c.group == group)
    }

    fn push(&mut self, group: &'static str, name: String, passed: bool, detail: String) {
        self.checks.push(Check {
            group,
            name,
            passed,
            informational: false,
            detail,
        });
    }
}

impl fmt::Display for FixtureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match (c.passed, c.informational) {
                (true, _) => "PASS",
                (false, true) => "NOTE",
                (false, false) => "FAIL",
            };
            writeln!(f, "{status} {} {} {}", c.group, c.name, c.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

#[derive(Debug, Deserialize)]
struct EnergyRow {
    molecule: String,
    r: f64,
    exact: f64,
    vqe_mr: f64,
    vqe_mr_err: f64,
    vqe_hf: f64,
    vqe_hf_err: f64,
    mrem: f64,
    mrem_err: f64,
    rem: f64,
    rem_err: f64,
}

#[derive(Debug, Deserialize)]
pub struct MrStateRow {
    pub molecule: String,
    pub r: f64,
    pub template: String,
    pub params: Vec<f64>,
    pub target: serde_json::Value,
}

#[derive(Debug, Deserialize)]
struct ResourceRow {
    kind: String,
    system: String,
    n_qubits: usize,
    layers: Option<usize>,
    template: Option<String>,
    reference: Option<String>,
    n1: Option<usize>,
    n2: usize,
    check: String,
}

fn csv_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn load_template(root: &Path, name: &str) -> Result<PrepTemplate, CliError> {
    Ok(PrepTemplate::from_json(&read(
        &root.join("templates").join(format!("{name}.json")),
    )?)?)
}

pub fn load_mr_states(root: &Path) -> Result<Vec<MrStateRow>, CliError> {
    let text = read(&root.join("tables").join("mr_states.json"))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("mr_states.json: {e}")))
}

fn check_energies(root: &Path, report: &mut FixtureReport) -> Result<(), CliError> {
    let rows: Vec<EnergyRow> = csv_rows(&root.join("tables").join("energies.csv"))?;
    for row in rows {
        for (method, e, tab) in [
            ("vqe_mr", row.vqe_mr, row.vqe_mr_err),
            ("vqe_hf", row.vqe_hf, row.vqe_hf_err),
            ("mrem", row.mrem, row.mrem_err),
            ("rem", row.rem, row.rem_err),
        ] {
            let err = (e - row.exact).abs();
            let gap = (err - tab).abs();
            report.push(
                "energies",
                format!("{} {:.2} {method}", row.molecule, row.r),
                gap <= ENERGY_TOLERANCE,
                format!("|E - exact| = {err:.4}, tabulated {tab:.4}"),
            );
        }
    }
    Ok(())
}

/// Largest deviation between prepared amplitudes and tabulated coefficients.
pub fn amplitude_gap(c: &Circuit, target: &MrTarget) -> Result<f64, CliError> {
    let state = run_pure::<f64>(c, 0)?;
    let amps = state.amplitudes().expect("pure run");
    Ok(target
        .components
        .iter()
        .map(|(d, coeff)| (amps[*d as usize].re - coeff).abs())
        .fold(0.0, f64::max))
}

fn check_mr_states(root: &Path, report: &mut FixtureReport) -> Result<(), CliError> {
    for row in load_mr_states(root)? {
        let name = format!("{} {:.2} {}", row.molecule, row.r, row.template);
        let target = MrTarget::from_json(&row.target.to_string())?;
        let template = load_template(root, &row.template)?;
        let tabulated = bind_template(target.reference, &template, &row.params)?;
        let gap = amplitude_gap(&tabulated, &target)?;
        report.push(
            "mr_states",
            format!("{name} tabulated-angles"),
            gap <= AMPLITUDE_TOLERANCE,
            format!("max amplitude gap {gap:.2e}"),
        );
        let solved = solve_parameters(&target, &template)?;
        let gap = amplitude_gap(&bind_template(target.reference, &template, &solved)?, &target)?;
        report.push(
            "mr_states",
            format!("{name} solved-angles"),
            gap <= AMPLITUDE_TOLERANCE,
            format!("max amplitude gap {gap:.2e}, angles {solved:.4?}"),
        );
    }
    Ok(())
}

fn check_resources(root: &Path, report: &mut FixtureReport) -> Result<(), CliError> {
    let rows: Vec<ResourceRow> = csv_rows(&root.join("tables").join("gate_resources.csv"))?;
    for row in rows {
        let circuit = match row.kind.as_str() {
            "gate" => {
                let kind = GateKind::from_name(&row.system)
                    .ok_or_else(|| CliError::usage(format!("unknown gate {}", row.system)))?;
                let qubits: Vec<usize> = (0..kind.arity()).rev().collect();
                let angle = kind.takes_angle().then_some(Angle::Bound(0.3));
                decompose(&GateOp::new(kind, qubits, angle)?)?
            }
            "hea" => {
                let layers = row.layers.ok_or_else(|| CliError::usage("hea row without layers"))?;
                build_ry_linear(row.n_qubits, layers)?
            }
            kind @ ("hf" | "mr") => {
                let bits = row
                    .reference
                    .as_deref()
                    .ok_or_else(|| CliError::usage("row without reference"))?;
                let reference = parse_bits(bits, row.n_qubits)?;
                if kind == "hf" {
                    reference_layer(row.n_qubits, reference)
                } else {
                    let name = row
                        .template
                        .as_deref()
                        .ok_or_else(|| CliError::usage("mr row without template"))?;
                    let template = load_template(root, name)?;
                    bind_template(reference, &template, &vec![0.3; template.slot_count()])?
                }
            }
            other => return Err(CliError::usage(format!("unknown resource kind {other}"))),
        };
        let got = count_resources(&circuit, true);
        let n1_ok = row.n1.is_none_or(|n1| n1 == got.n1);
        let passed = match row.check.as_str() {
            "n2" => got.n2 == row.n2,
            "exact" => n1_ok && got.n2 == row.n2,
            "report" => n1_ok && got.n2 == row.n2,
            other => return Err(CliError::usage(format!("unknown check {other}"))),
        };
        let expected = row.n1.map_or("-".to_owned(), |n| n.to_string());
        report.checks.push(Check {
            group: "resources",
            name: format!("{} {}", row.kind, row.system),
            passed,
            informational: row.check == "report",
            detail: format!(
                "(n1, n2) = ({}, {}), tabulated ({expected}, {})",
                got.n1, got.n2, row.n2
            ),
        });
    }
    Ok(())
}

/// Validates every table under `root` (the fixtures directory).
pub fn validate_fixtures(root: &Path) -> Result<FixtureReport, CliError> {
    let mut report = FixtureReport::default();
    check_energies(root, &mut report)?;
    check_mr_states(root, &mut report)?;
    check_resources(root, &mut report)?;
    Ok(report)
}
