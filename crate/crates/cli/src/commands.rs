use std::io::Write;
use std::path::{Path, PathBuf};

use mrem::circuit::build_ry_linear;
use mrem::driver::{
    imfil_minimize, read_sweep_points, run_mrem, run_pes_sweep, write_long_csv, write_results_csv, ImFilConfig,
    Objective, Operator, SpinPenalty, SweepConfig, VqeProblem,
};
use mrem::fermion::add_spin_penalty;
use mrem::pauli::{exact_ground_state, parse_pauli_sum};
use mrem::stateprep::{
    bind_template, compile_state, parse_bits, reference_layer, verify_preparation, MrTarget, PrepTemplate,
};
use mrem::taper::taper_operator;
use mrem::{
    Circuit, NoiseModel, OrbitalLayout, PauliSum64, ShotModel, SpinPenaltyConfig, SymmetrySet, DENSE_QUBIT_LIMIT,
};
use serde_json::json;

use crate::fixtures::{validate_fixtures, AMPLITUDE_TOLERANCE};
use crate::{AnsatzArgs, Cli, CliError, Command, RunConfig, ShotsArg, EXIT_OK, EXIT_VALIDATION};

const DEFAULT_OUT: &str = "mrem-out";

struct Ctx<'a> {
    cli: &'a Cli,
    cfg: RunConfig,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|_| CliError::usage(format!("bad {what} value {v:?}")))
        })
        .collect()
}

impl Ctx<'_> {
    fn path(&self, flag: &Option<PathBuf>, from_cfg: &Option<PathBuf>, what: &str) -> Result<PathBuf, CliError> {
        flag.clone()
            .or_else(|| from_cfg.clone())
            .ok_or_else(|| CliError::usage(format!("missing {what} (flag or config)")))
    }

    fn hamiltonian(&self, flag: &Option<PathBuf>) -> Result<PauliSum64, CliError> {
        let path = self.path(flag, &self.cfg.hamiltonian, "hamiltonian")?;
        Ok(parse_pauli_sum(&read(&path)?)?)
    }

    fn target(&self, flag: &Option<PathBuf>) -> Result<MrTarget, CliError> {
        let path = self.path(flag, &self.cfg.target, "target")?;
        Ok(MrTarget::from_json(&read(&path)?)?)
    }

    fn template(&self, flag: &Option<PathBuf>) -> Result<PrepTemplate, CliError> {
        let path = self.path(flag, &self.cfg.template, "template")?;
        Ok(PrepTemplate::from_json(&read(&path)?)?)
    }

    fn seed(&self) -> Option<u64> {
        self.cli.seed.or(self.cfg.seed)
    }

    fn noise(&self) -> Result<Option<NoiseModel>, CliError> {
        if self.cli.noiseless || self.cfg.noiseless {
            return Ok(None);
        }
        let mut nm = self.cfg.noise_model()?;
        if let Some(seed) = self.seed() {
            nm = nm.with_seed(seed);
        }
        nm.validate()?;
        Ok(Some(nm))
    }

    fn shots(&self) -> Result<ShotModel, CliError> {
        let sm = match self.cli.shots {
            Some(ShotsArg::Off) => ShotModel::off(),
            Some(ShotsArg::Count(n)) => ShotModel::with_shots(n),
            None => self.cfg.shot_model()?,
        };
        sm.validate()?;
        Ok(sm)
    }

    fn layers(&self, a: &AnsatzArgs) -> usize {
        a.layers.or(self.cfg.layers).unwrap_or(1)
    }

    fn imfil(&self, a: &AnsatzArgs) -> ImFilConfig {
        let mut cfg = self.cfg.imfil.clone().unwrap_or_default();
        if let Some(b) = a.budget {
            cfg.budget = Some(b);
        }
        cfg
    }

    fn spin_penalty(&self, a: &AnsatzArgs) -> Result<Option<SpinPenalty>, CliError> {
        let lambda = a.lambda.or(self.cfg.lambda).unwrap_or(0.0);
        SpinPenaltyConfig::new(lambda)?;
        let layout = match &a.layout {
            Some(s) => {
                let v: Vec<usize> = parse_list(s, "layout")?;
                let [s, na, nb] = v[..] else {
                    return Err(CliError::usage("layout takes n_spatial,n_alpha,n_beta"));
                };
                Some(OrbitalLayout::new(s, na, nb)?)
            }
            None => self.cfg.layout,
        };
        match (lambda > 0.0, layout) {
            (false, _) => Ok(None),
            (true, None) => Err(CliError::usage("a spin penalty needs --layout")),
            (true, Some(layout)) => Ok(Some(SpinPenalty { layout, lambda })),
        }
    }

    fn problem(&self, h: &PauliSum64, init: Circuit, a: &AnsatzArgs) -> Result<VqeProblem, CliError> {
        let ansatz = build_ry_linear(h.n_qubits(), self.layers(a))?;
        let mut p = VqeProblem::new(h.clone(), ansatz, init)?
            .with_seed(self.seed().unwrap_or(0))
            .with_noise(self.noise()?)?
            .with_shots(self.shots()?)?;
        if let Some(sp) = self.spin_penalty(a)? {
            p = p.with_objective(add_spin_penalty(h, &sp.layout, &SpinPenaltyConfig::new(sp.lambda)?)?)?;
        }
        Ok(p)
    }

    fn out_dir(&self) -> Result<PathBuf, CliError> {
        let dir = self
            .cli
            .out
            .clone()
            .or_else(|| self.cfg.output.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        std::fs::create_dir_all(&dir)?;
        Ok(dir)
    }

    fn write(&self, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.out_dir()?.join(name);
        std::fs::write(&path, contents)?;
        Ok(path)
    }
}

fn print_json(stdout: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    writeln!(stdout, "{}", serde_json::to_string_pretty(value).expect("json value"))?;
    Ok(())
}

fn json_bytes(value: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("json value");
    s.push('\n');
    s.into_bytes()
}

pub(crate) fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ctx = Ctx { cli, cfg };
    match &cli.command {
        Command::Parse(a) => {
            let h = ctx.hamiltonian(&a.hamiltonian)?;
            if h.is_empty() {
                writeln!(stderr, "warning: zero-term sum")?;
            }
            print_json(
                stdout,
                &json!({
                    "n_qubits": h.n_qubits(),
                    "n_terms": h.len(),
                    "one_norm": h.one_norm(),
                    "hermitian": h.is_hermitian(),
                }),
            )?;
        }
        Command::Exact(a) => {
            let h = ctx.hamiltonian(&a.hamiltonian)?;
            let (e, _) = exact_ground_state(&h)?;
            print_json(stdout, &json!({ "n_qubits": h.n_qubits(), "ground_energy": e }))?;
        }
        Command::Taper(a) => {
            let h = ctx.hamiltonian(&a.hamiltonian)?;
            let mut sym = SymmetrySet::for_hamiltonian(&h)?;
            if let Some(det) = &a.det {
                sym = sym.with_sector_of(parse_bits(det, h.n_qubits())?)?;
            } else if let Some(s) = &a.sector {
                sym = sym.with_sector(parse_list(s, "sector")?)?;
            }
            let tapered = taper_operator(&h, &sym)?;
            let path = ctx.write("tapered.txt", tapered.to_text().as_bytes())?;
            let ground = (tapered.n_qubits() <= DENSE_QUBIT_LIMIT && !tapered.is_empty())
                .then(|| exact_ground_state(&tapered).map(|(e, _)| e))
                .transpose()?;
            print_json(
                stdout,
                &json!({
                    "n_qubits": h.n_qubits(),
                    "reduced_qubits": sym.reduced_qubits(),
                    "generators": sym.generators().iter().map(|g| g.label()).collect::<Vec<_>>(),
                    "tapered_qubits": sym.tapered_qubits(),
                    "sector": sym.sector(),
                    "n_terms": tapered.len(),
                    "ground_energy": ground,
                    "output": path,
                }),
            )?;
        }
        Command::Prep(a) => {
            let target = ctx.target(&a.target)?;
            let template = ctx.template(&a.template)?;
            let (circuit, angles) = match &a.params {
                Some(p) => {
                    let angles: Vec<f64> = parse_list(p, "angle")?;
                    (bind_template(target.reference, &template, &angles)?, angles)
                }
                None => compile_state(&target, &template)?,
            };
            let report = verify_preparation(&circuit, &target)?;
            let passed = report.passes(AMPLITUDE_TOLERANCE);
            ctx.write("prep_circuit.json", format!("{}\n", circuit.to_json()).as_bytes())?;
            ctx.write("prep_angles.json", &json_bytes(&json!({ "angles": angles })))?;
            ctx.write(
                "prep_report.json",
                &json_bytes(&serde_json::to_value(&report).expect("report")),
            )?;
            print_json(
                stdout,
                &json!({
                    "angles": angles,
                    "passed": passed,
                    "max_amplitude_error": report.max_amplitude_error,
                    "leakage": report.leakage,
                    "weight_check": report.weight_check,
                }),
            )?;
            if !passed {
                return Err(CliError::Validation(format!(
                    "prepared state misses the target by {:.2e}",
                    report.max_amplitude_error
                )));
            }
        }
        Command::Vqe(a) => {
            let h = ctx.hamiltonian(&a.hamiltonian)?;
            let n = h.n_qubits();
            let init = if let Some(det) = &a.det {
                reference_layer(n, parse_bits(det, n)?)
            } else if a.target.is_some() || ctx.cfg.target.is_some() {
                compile_state(&ctx.target(&a.target)?, &ctx.template(&a.template)?)?.0
            } else {
                Circuit::new(n)
            };
            let problem = ctx.problem(&h, init, &a.ansatz)?;
            let mut obj = Objective::new(&problem);
            let opt = imfil_minimize(|t| obj.eval(t), &vec![0.0; problem.n_params()], &ctx.imfil(&a.ansatz))?;
            let energy = problem.energy(Operator::Measured, &opt.theta, u64::MAX - 1)?;
            let value = json!({
                "energy": energy,
                "objective": opt.f_min,
                "iterations": opt.iterations,
                "evaluations": opt.evaluations,
                "truncated": opt.truncated,
                "theta": opt.theta,
            });
            ctx.write("vqe.json", &json_bytes(&value))?;
            print_json(stdout, &value)?;
        }
        Command::Mrem(a) => {
            let h = ctx.hamiltonian(&a.hamiltonian)?;
            let target = ctx.target(&a.target)?;
            let n = h.n_qubits();
            let hf_only = a.hf_only || ctx.cfg.hf_only;
            let mr_only = a.mr_only || ctx.cfg.mr_only;
            let hf = if mr_only {
                None
            } else {
                let problem = ctx.problem(&h, reference_layer(n, target.reference), &a.ansatz)?;
                let reference = MrTarget::single(n, target.reference)?.tapered(target.tapered);
                Some(run_mrem(&problem, &reference, &ctx.imfil(&a.ansatz))?)
            };
            let mr = if hf_only {
                None
            } else {
                let (prep, _) = compile_state(&target, &ctx.template(&a.template)?)?;
                let problem = ctx.problem(&h, prep, &a.ansatz)?;
                Some(run_mrem(&problem, &target, &ctx.imfil(&a.ansatz))?)
            };
            let exact = (n <= DENSE_QUBIT_LIMIT)
                .then(|| exact_ground_state(&h).map(|(e, _)| e))
                .transpose()?;
            let value = json!({ "e_exact_diag": exact, "hf": hf, "mr": mr });
            ctx.write("mrem.json", &json_bytes(&value))?;
            print_json(stdout, &value)?;
        }
        Command::Pes(a) => {
            let path = ctx.path(&a.points, &ctx.cfg.points, "points file")?;
            let points = read_sweep_points(&path)?;
            let cfg = SweepConfig {
                layers: ctx.layers(&a.ansatz),
                spin_penalty: ctx.spin_penalty(&a.ansatz)?,
                noise: ctx.noise()?,
                shots: ctx.shots()?,
                imfil: ctx.imfil(&a.ansatz),
                seed: ctx.seed().unwrap_or(0),
                run_hf: !(a.mr_only || ctx.cfg.mr_only),
                run_mr: !(a.hf_only || ctx.cfg.hf_only),
            };
            let rows = run_pes_sweep(&points, &cfg)?;
            let mut wide = Vec::new();
            write_results_csv(&rows, &mut wide)?;
            let mut long = Vec::new();
            write_long_csv(&rows, &mut long)?;
            let results = ctx.write("results.csv", &wide)?;
            let long_path = ctx.write("results_long.csv", &long)?;
            let failed: Vec<&str> = rows
                .iter()
                .filter(|r| r.error.is_some())
                .map(|r| r.label.as_str())
                .collect();
            for r in rows.iter().filter(|r| r.error.is_some()) {
                writeln!(
                    stderr,
                    "warning: point {} failed: {}",
                    r.label,
                    r.error.as_deref().unwrap_or("")
                )?;
            }
            print_json(
                stdout,
                &json!({
                    "points": rows.len(),
                    "failed": failed,
                    "results": results,
                    "long": long_path,
                }),
            )?;
        }
        Command::ValidateFixtures(a) => {
            let report = validate_fixtures(&a.fixtures)?;
            writeln!(stdout, "{report}")?;
            if !report.passed() {
                return Ok(EXIT_VALIDATION);
            }
        }
    }
    Ok(EXIT_OK)
}
