//! JSON run configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use unravel::engine::{IntegratorConfig, NormGuard};
use unravel::ensemble::{EnsembleConfig, DEFAULT_STRIDE};
use unravel::two_band::default_omega;
use unravel::{CVec2, ComponentState, JumpConvention, ModelParams};

/// Accepted deviation of the initial total norm² from 1.
pub const INITIAL_NORM_TOLERANCE: f64 = 1e-9;

fn yes() -> bool {
    true
}

fn one() -> f64 {
    1.0
}

fn default_guard() -> Option<[f64; 2]> {
    let g = NormGuard::default();
    Some([g.lower, g.upper])
}

fn default_stride() -> usize {
    DEFAULT_STRIDE
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub kappa: f64,
    #[serde(default = "default_omega")]
    pub omega1: f64,
    #[serde(default = "default_omega")]
    pub omega2: f64,
    #[serde(default = "one")]
    pub epsilon: f64,
    #[serde(default)]
    pub jump_convention: JumpConvention,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "yes")]
    pub renormalize_each_step: bool,
    /// `null` disables the guard.
    #[serde(default = "default_guard")]
    pub norm_guard: Option<[f64; 2]>,
    #[serde(default = "yes")]
    pub jump_at_step_end: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub trajectories: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_stride")]
    pub output_stride: usize,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub psi1: CVec2,
    pub psi2: CVec2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub integrator: IntegratorSection,
    pub ensemble: EnsembleSection,
    pub initial_state: InitialState,
    #[serde(default = "yes")]
    pub diffusion_enabled: bool,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

/// A configuration problem, with the 1-based line it refers to when known.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Line of the first occurrence of `"key"` in `text`.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError {
            line: (e.line() > 0).then_some(e.line()),
            message: strip_position(&e.to_string()),
        })?;
        cfg.validate().map_err(|(key, message)| ConfigError {
            line: line_of(text, key),
            message,
        })?;
        Ok(cfg)
    }

    pub fn params(&self) -> ModelParams {
        let m = &self.model;
        ModelParams {
            gamma0: m.gamma0,
            gamma1: m.gamma1,
            gamma2: m.gamma2,
            kappa: m.kappa,
            omega1: m.omega1,
            omega2: m.omega2,
            epsilon: m.epsilon,
        }
    }

    pub fn integrator(&self) -> IntegratorConfig {
        let i = &self.integrator;
        IntegratorConfig {
            dt: i.dt,
            t_final: i.t_final,
            renormalize_each_step: i.renormalize_each_step,
            norm_guard: i.norm_guard.map(|[lower, upper]| NormGuard { lower, upper }),
            jump_at_step_end: i.jump_at_step_end,
        }
    }

    pub fn ensemble(&self) -> EnsembleConfig {
        let e = &self.ensemble;
        EnsembleConfig {
            trajectories: e.trajectories,
            master_seed: e.master_seed,
            integrator: self.integrator(),
            output_stride: e.output_stride,
            snapshot_times: e.snapshot_times.clone(),
        }
    }

    pub fn initial(&self) -> ComponentState {
        ComponentState::pair(self.initial_state.psi1, self.initial_state.psi2)
    }

    /// Checks value constraints; the error names the key to point at.
    fn validate(&self) -> Result<(), (&'static str, String)> {
        self.params().validate().map_err(|e| match e {
            unravel::Error::InvalidParameter { name, .. } => (name, e.to_string()),
            other => ("model", other.to_string()),
        })?;
        self.ensemble().validate().map_err(|e| {
            let key = match &e {
                unravel::Error::InvalidParameter { name, .. } => *name,
                _ => "integrator",
            };
            (key, e.to_string())
        })?;
        let n2 = self.initial().total_norm2();
        if !((n2 - 1.0).abs() <= INITIAL_NORM_TOLERANCE) {
            return Err((
                "initial_state",
                format!("initial state must have total norm 1 (got norm² = {n2})"),
            ));
        }
        Ok(())
    }
}

/// serde_json appends " at line L column C"; the line is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
