//! Run configuration: a JSON file whose relative paths resolve against the
//! file's directory, overridden by command-line flags.

use std::path::{Path, PathBuf};

use mrem::driver::ImFilConfig;
use mrem::{NoiseModel, OrbitalLayout, ShotModel};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub hamiltonian: Option<PathBuf>,
    pub target: Option<PathBuf>,
    pub template: Option<PathBuf>,
    /// Noise model JSON file.
    pub noise: Option<PathBuf>,
    /// Shot model JSON file.
    pub shots: Option<PathBuf>,
    pub points: Option<PathBuf>,
    pub layout: Option<OrbitalLayout>,
    pub lambda: Option<f64>,
    pub layers: Option<usize>,
    pub imfil: Option<ImFilConfig>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub noiseless: bool,
    #[serde(default)]
    pub hf_only: bool,
    #[serde(default)]
    pub mr_only: bool,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut cfg: RunConfig = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut cfg.hamiltonian,
            &mut cfg.target,
            &mut cfg.template,
            &mut cfg.noise,
            &mut cfg.shots,
            &mut cfg.points,
            &mut cfg.output,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.layers == Some(0) {
            return Err(CliError::usage("layers must be at least 1"));
        }
        if let Some(l) = self.lambda {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(CliError::usage("lambda must be >= 0"));
            }
        }
        if self.hf_only && self.mr_only {
            return Err(CliError::usage("hf_only and mr_only are exclusive"));
        }
        for p in [
            &self.hamiltonian,
            &self.target,
            &self.template,
            &self.noise,
            &self.shots,
            &self.points,
        ]
        .into_iter()
        .flatten()
        {
            if !p.exists() {
                return Err(CliError::usage(format!("{} does not exist", p.display())));
            }
        }
        Ok(())
    }

    pub fn noise_model(&self) -> Result<NoiseModel, CliError> {
        match &self.noise {
            Some(p) => read_json(p),
            None => Ok(NoiseModel::default()),
        }
    }

    pub fn shot_model(&self) -> Result<ShotModel, CliError> {
        match &self.shots {
            Some(p) => read_json(p),
            None => Ok(ShotModel::default()),
        }
    }
}
