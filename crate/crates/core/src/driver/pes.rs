//! Potential-energy-surface sweeps: one REM and one MREM run per geometry.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_mrem, ImFilConfig, MitigationRecord, VqeProblem};
use crate::circuit::build_ry_linear;
use crate::error::{Error, Result};
use crate::fermion::{add_spin_penalty, OrbitalLayout, SpinPenaltyConfig};
use crate::pauli::{exact_ground_state, parse_pauli_sum, PauliSum};
use crate::sim::{NoiseModel, ShotModel};
use crate::stateprep::{compile_state, reference_layer, MrTarget, PrepTemplate};

/// One geometry of a sweep. Relative paths are resolved by
/// [`read_sweep_points`] against the point file's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PesPoint {
    pub label: String,
    pub r: f64,
    pub hamiltonian: PathBuf,
    pub target: PathBuf,
    pub template: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinPenalty {
    pub layout: OrbitalLayout,
    pub lambda: f64,
}

impl SpinPenalty {
    fn config(&self) -> Result<SpinPenaltyConfig> {
        SpinPenaltyConfig::new(self.lambda)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub layers: usize,
    pub spin_penalty: Option<SpinPenalty>,
    /// `None` runs noiseless.
    pub noise: Option<NoiseModel>,
    pub shots: ShotModel,
    pub imfil: ImFilConfig,
    pub seed: u64,
    pub run_hf: bool,
    pub run_mr: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            layers: 1,
            spin_penalty: None,
            noise: Some(NoiseModel::default()),
            shots: ShotModel::default(),
            imfil: ImFilConfig::default(),
            seed: 0,
            run_hf: true,
            run_mr: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::Config("layers must be at least 1".into()));
        }
        if let Some(sp) = &self.spin_penalty {
            sp.layout.validate()?;
            sp.config()?;
        }
        if let Some(nm) = &self.noise {
            nm.validate()?;
        }
        self.shots.validate()?;
        self.imfil.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PesRow {
    pub label: String,
    pub r: f64,
    pub e_exact_diag: Option<f64>,
    pub hf: Option<MitigationRecord>,
    pub mr: Option<MitigationRecord>,
    pub error: Option<String>,
}

pub const RESULT_COLUMNS: [&str; 20] = [
    "label",
    "R",
    "e_exact_diag",
    "e_exact_ref_hf",
    "e_exact_ref_mr",
    "e_noisy_ref_hf",
    "e_noisy_ref_mr",
    "e_vqe_hf",
    "e_vqe_mr",
    "e_rem",
    "e_mrem",
    "err_vqe_hf",
    "err_vqe_mr",
    "err_rem",
    "err_mrem",
    "iters_hf",
    "iters_mr",
    "evals_hf",
    "evals_mr",
    "error",
];

/// Loads a JSON list of points, resolving relative paths against the
/// file's directory.
pub fn read_sweep_points(path: &Path) -> Result<Vec<PesPoint>> {
    let text = std::fs::read_to_string(path)?;
    let mut points: Vec<PesPoint> = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    for p in &mut points {
        for f in [&mut p.hamiltonian, &mut p.target, &mut p.template] {
            if f.is_relative() {
                *f = base.join(&*f);
            }
        }
    }
    Ok(points)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for `(point, variant)`, independent of scheduling.
fn point_seed(seed: u64, index: usize, variant: u64) -> u64 {
    splitmix(splitmix(seed ^ splitmix(index as u64)) ^ variant)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

struct PointResult {
    e_exact_diag: f64,
    hf: Option<MitigationRecord>,
    mr: Option<MitigationRecord>,
}

fn run_point(index: usize, point: &PesPoint, cfg: &SweepConfig) -> Result<PointResult> {
    let h: PauliSum<f64> = parse_pauli_sum(&read_text(&point.hamiltonian)?)?;
    let target = MrTarget::from_json(&read_text(&point.target)?)?;
    let n = h.n_qubits();
    if target.n_qubits != n {
        return Err(Error::dim(format!(
            "{n}-qubit hamiltonian with a {}-qubit target",
            target.n_qubits
        )));
    }
    let (e_exact_diag, _) = exact_ground_state(&h)?;
    let ansatz = build_ry_linear(n, cfg.layers)?;
    let objective = match &cfg.spin_penalty {
        Some(sp) => Some(add_spin_penalty(&h, &sp.layout, &sp.config()?)?),
        None => None,
    };
    let problem_for = |init, variant| -> Result<VqeProblem> {
        let seed = point_seed(cfg.seed, index, variant);
        let mut p = VqeProblem::new(h.clone(), ansatz.clone(), init)?
            .with_noise(cfg.noise.clone().map(|nm| nm.with_seed(seed)))?
            .with_shots(cfg.shots)?
            .with_seed(seed);
        if let Some(obj) = &objective {
            p = p.with_objective(obj.clone())?;
        }
        Ok(p)
    };
    let hf = if cfg.run_hf {
        let hf_target = MrTarget::single(n, target.reference)?.tapered(target.tapered);
        let problem = problem_for(reference_layer(n, target.reference), 0)?;
        Some(run_mrem(&problem, &hf_target, &cfg.imfil)?)
    } else {
        None
    };
    let mr = if cfg.run_mr {
        let template = PrepTemplate::from_json(&read_text(&point.template)?)?;
        let (prep, _) = compile_state(&target, &template)?;
        let problem = problem_for(prep, 1)?;
        Some(run_mrem(&problem, &target, &cfg.imfil)?)
    } else {
        None
    };
    Ok(PointResult { e_exact_diag, hf, mr })
}

/// Runs every point in parallel; a failing point records its error and
/// leaves the energies empty. Rows come back in point order.
pub fn run_pes_sweep(points: &[PesPoint], cfg: &SweepConfig) -> Result<Vec<PesRow>> {
    cfg.validate()?;
    Ok(points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let base = PesRow {
                label: p.label.clone(),
                r: p.r,
                e_exact_diag: None,
                hf: None,
                mr: None,
                error: None,
            };
            match run_point(i, p, cfg) {
                Ok(res) => PesRow {
                    e_exact_diag: Some(res.e_exact_diag),
                    hf: res.hf,
                    mr: res.mr,
                    ..base
                },
                Err(e) => PesRow {
                    error: Some(format!("{}: {e}", e.kind())),
                    ..base
                },
            }
        })
        .collect())
}

impl PesRow {
    /// Numeric columns in [`RESULT_COLUMNS`] order, without label, R and error.
    fn values(&self) -> Vec<(&'static str, Option<f64>)> {
        let exact = self.e_exact_diag;
        let err = |e: Option<f64>| e.zip(exact).map(|(a, b)| (a - b).abs());
        let hf = self.hf.as_ref();
        let mr = self.mr.as_ref();
        let count = |v: Option<usize>| v.map(|v| v as f64);
        vec![
            ("e_exact_diag", exact),
            ("e_exact_ref_hf", hf.map(|r| r.e_exact_ref)),
            ("e_exact_ref_mr", mr.map(|r| r.e_exact_ref)),
            ("e_noisy_ref_hf", hf.map(|r| r.e_noisy_ref)),
            ("e_noisy_ref_mr", mr.map(|r| r.e_noisy_ref)),
            ("e_vqe_hf", hf.map(|r| r.e_vqe_raw)),
            ("e_vqe_mr", mr.map(|r| r.e_vqe_raw)),
            ("e_rem", hf.map(|r| r.e_mitigated)),
            ("e_mrem", mr.map(|r| r.e_mitigated)),
            ("err_vqe_hf", err(hf.map(|r| r.e_vqe_raw))),
            ("err_vqe_mr", err(mr.map(|r| r.e_vqe_raw))),
            ("err_rem", err(hf.map(|r| r.e_mitigated))),
            ("err_mrem", err(mr.map(|r| r.e_mitigated))),
            ("iters_hf", count(hf.map(|r| r.iterations))),
            ("iters_mr", count(mr.map(|r| r.iterations))),
            ("evals_hf", count(hf.map(|r| r.evaluations))),
            ("evals_mr", count(mr.map(|r| r.evaluations))),
        ]
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Wide results table, one row per point.
pub fn write_results_csv<W: Write>(rows: &[PesRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RESULT_COLUMNS).map_err(csv_error)?;
    for row in rows {
        let mut rec = vec![row.label.clone(), row.r.to_string()];
        rec.extend(row.values().into_iter().map(|(_, v)| cell(v)));
        rec.push(row.error.clone().unwrap_or_default());
        out.write_record(&rec).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

/// Long format `(point, R, series, value)` for plotting; empty values are
/// skipped.
pub fn write_long_csv<W: Write>(rows: &[PesRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["point", "R", "series", "value"]).map_err(csv_error)?;
    for row in rows {
        for (series, v) in row.values() {
            if let Some(v) = v {
                out.write_record([row.label.as_str(), &row.r.to_string(), series, &v.to_string()])
                    .map_err(csv_error)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_by_point_and_variant() {
        assert_ne!(point_seed(7, 0, 0), point_seed(7, 1, 0));
        assert_ne!(point_seed(7, 0, 0), point_seed(7, 0, 1));
        assert_eq!(point_seed(7, 3, 1), point_seed(7, 3, 1));
    }

    #[test]
    fn missing_files_are_reported_per_point() {
        let points = vec![PesPoint {
            label: "p0".into(),
            r: 1.0,
            hamiltonian: "/nonexistent/h.txt".into(),
            target: "/nonexistent/t.json".into(),
            template: "/nonexistent/c.json".into(),
        }];
        let rows = run_pes_sweep(&points, &SweepConfig::default()).unwrap();
        assert!(rows[0].error.as_deref().unwrap().starts_with("config"));
        let mut buf = Vec::new();
        write_results_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("label,R,e_exact_diag"));
    }
}
