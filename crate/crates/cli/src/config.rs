// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON run configuration.
//!
//! A document names a builtin scenario or defines one inline, optionally
//! overriding environment and control parameters. Unknown keys are rejected
//! and every error carries the key path it refers to.
//!
//! ```json
//! {
//!   "scenario": "xfer_fwd",
//!   "output_dir": "out",
//!   "formats": ["csv", "json"],
//!   "env": { "alpha": 0.1, "omega0": 10, "kT": 300, "r": 0.05 },
//!   "control": { "g1": 10, "g2": 30, "theta": 0.01, "epsilon": 5e-4,
//!                "dt": 5e-4, "t_f": 6, "f_max": 100 }
//! }
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use tclq_core::bloch::from_bloch_strict;
use tclq_core::scenario::TRANSFER_HORIZON;
use tclq_core::{find_scenario, BlochVector, Case, CaseKind, ControlParams, EnvironmentParams, Error, Scenario};

/// Default step of inline free runs.
pub const DEFAULT_FREE_DT: f64 = 0.01;
/// Default number of random initial states used by `check`.
pub const DEFAULT_RANDOM_STATES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvOverrides {
    pub alpha: Option<f64>,
    pub omega0: Option<f64>,
    #[serde(rename = "kT")]
    pub kt: Option<f64>,
    pub r: Option<f64>,
}

impl EnvOverrides {
    pub fn is_empty(&self) -> bool {
        *self == EnvOverrides::default()
    }

    pub fn apply(&self, env: &EnvironmentParams) -> EnvironmentParams {
        EnvironmentParams {
            alpha: self.alpha.unwrap_or(env.alpha),
            omega0: self.omega0.unwrap_or(env.omega0),
            kt: self.kt.unwrap_or(env.kt),
            r: self.r.unwrap_or(env.r),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlOverrides {
    pub g1: Option<f64>,
    pub g2: Option<f64>,
    pub theta: Option<f64>,
    pub epsilon: Option<f64>,
    pub dt: Option<f64>,
    pub t_f: Option<f64>,
    pub f_max: Option<f64>,
    pub stop_on_target: Option<bool>,
    pub stall_steps: Option<usize>,
}

impl ControlOverrides {
    pub fn is_empty(&self) -> bool {
        *self == ControlOverrides::default()
    }

    pub fn apply(&self, c: &ControlParams) -> ControlParams {
        ControlParams {
            g1: self.g1.unwrap_or(c.g1),
            g2: self.g2.unwrap_or(c.g2),
            theta: self.theta.unwrap_or(c.theta),
            epsilon: self.epsilon.unwrap_or(c.epsilon),
            dt: self.dt.unwrap_or(c.dt),
            t_f: self.t_f.unwrap_or(c.t_f),
            f_max: self.f_max.or(c.f_max),
            stop_on_target: self.stop_on_target.unwrap_or(c.stop_on_target),
            stall_steps: self.stall_steps.unwrap_or(c.stall_steps),
        }
    }
}

/// The document as written, before resolution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub scenario: Option<String>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub env: Option<EnvOverrides>,
    pub control: Option<ControlOverrides>,
    /// Inline initial Bloch vector.
    pub initial: Option<[f64; 3]>,
    /// Inline target Bloch vector; makes the inline run a transfer.
    pub target: Option<[f64; 3]>,
    /// Horizon of an inline free run.
    pub t_f: Option<f64>,
    /// Step of an inline free run.
    pub dt: Option<f64>,
    pub random_states: Option<usize>,
    pub verbosity: Option<u8>,
}

/// A fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    pub random_states: usize,
    pub verbosity: u8,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    /// Dotted key path, or `.` for the document root.
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }

    fn from_core(section: &str, err: Error) -> Self {
        let path = match &err {
            Error::InvalidParameter { name, .. } => format!("{section}.{name}"),
            Error::CouplingTooStrong { .. } => format!("{section}.alpha"),
            _ => section.to_string(),
        };
        ConfigError::new(path, err.to_string())
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ConfigDocument = serde_path_to_error::deserialize(de)
        .map_err(|e| ConfigError::new(e.path().to_string(), e.inner().to_string()))?;
    resolve(doc)
}

pub fn parse_config_value(value: serde_json::Value) -> Result<RunConfig, ConfigError> {
    let doc: ConfigDocument = serde_path_to_error::deserialize(value)
        .map_err(|e| ConfigError::new(e.path().to_string(), e.inner().to_string()))?;
    resolve(doc)
}

/// Validates overrides first, then builds the scenario they apply to.
pub fn resolve(doc: ConfigDocument) -> Result<RunConfig, ConfigError> {
    let env_o = doc.env.clone().unwrap_or_default();
    let ctl_o = doc.control.clone().unwrap_or_default();

    env_o
        .apply(&EnvironmentParams::transfer_default())
        .validate()
        .map_err(|e| ConfigError::from_core("env", e))?;
    if !ctl_o.is_empty() {
        let base = ControlParams::new(1.0, 1.0, TRANSFER_HORIZON).expect("valid defaults");
        ctl_o.apply(&base).validate().map_err(|e| ConfigError::from_core("control", e))?;
    }

    let scenario = match (&doc.scenario, doc.initial) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::new(
                "initial",
                "an inline initial state cannot be combined with a named scenario",
            ))
        }
        (Some(name), None) => builtin_with_overrides(&doc, name, &env_o, &ctl_o)?,
        (None, Some(initial)) => inline_scenario(&doc, initial, &env_o, &ctl_o)?,
        (None, None) => {
            return Err(ConfigError::new(
                "scenario",
                "missing: name a builtin scenario or give an inline initial state",
            ))
        }
    };
    if doc.target.is_some() && doc.initial.is_none() {
        return Err(ConfigError::new("target", "requires an inline initial state"));
    }
    scenario.validate().map_err(|e| ConfigError::new("scenario", e.to_string()))?;

    let formats = match doc.formats {
        Some(f) if f.is_empty() => return Err(ConfigError::new("formats", "must list at least one format")),
        Some(f) => f,
        None => vec![Format::Csv],
    };

    Ok(RunConfig {
        scenario,
        output_dir: doc.output_dir.unwrap_or_else(|| PathBuf::from("out")),
        formats,
        random_states: doc.random_states.unwrap_or(DEFAULT_RANDOM_STATES),
        verbosity: doc.verbosity.unwrap_or(0),
    })
}

fn builtin_with_overrides(
    doc: &ConfigDocument,
    name: &str,
    env_o: &EnvOverrides,
    ctl_o: &ControlOverrides,
) -> Result<Scenario, ConfigError> {
    for (key, set) in [("t_f", doc.t_f.is_some()), ("dt", doc.dt.is_some())] {
        if set {
            return Err(ConfigError::new(key, "only applies to inline runs; use control.* for transfers"));
        }
    }
    let mut scenario = find_scenario(name).map_err(|e| ConfigError::new("scenario", e.to_string()))?;
    if !ctl_o.is_empty() && !scenario.cases.iter().any(|c| matches!(c.kind, CaseKind::Controlled { .. })) {
        return Err(ConfigError::new(
            "control",
            format!("scenario `{name}` has no controlled cases"),
        ));
    }
    for case in &mut scenario.cases {
        case.env = env_o.apply(&case.env);
        case.env.validate().map_err(|e| ConfigError::from_core("env", e))?;
        if let CaseKind::Controlled { control, .. } = &mut case.kind {
            *control = ctl_o.apply(control);
            control.validate().map_err(|e| ConfigError::from_core("control", e))?;
        }
    }
    Ok(scenario)
}

fn bloch_state(key: &str, v: [f64; 3]) -> Result<tclq_core::QubitState, ConfigError> {
    from_bloch_strict(BlochVector::from(v)).map_err(|e| ConfigError::new(key, e.to_string()))
}

fn inline_scenario(
    doc: &ConfigDocument,
    initial: [f64; 3],
    env_o: &EnvOverrides,
    ctl_o: &ControlOverrides,
) -> Result<Scenario, ConfigError> {
    let env = env_o.apply(&EnvironmentParams::transfer_default());
    let rho0 = bloch_state("initial", initial)?;
    let case = match doc.target {
        Some(target) => {
            for (key, set) in [("t_f", doc.t_f.is_some()), ("dt", doc.dt.is_some())] {
                if set {
                    return Err(ConfigError::new(key, "set control.t_f / control.dt for a transfer"));
                }
            }
            let g1 = ctl_o.g1.ok_or_else(|| ConfigError::new("control.g1", "required for an inline transfer"))?;
            let g2 = ctl_o.g2.ok_or_else(|| ConfigError::new("control.g2", "required for an inline transfer"))?;
            let base = ControlParams::new(g1, g2, TRANSFER_HORIZON).map_err(|e| ConfigError::from_core("control", e))?;
            let control = ctl_o.apply(&base);
            control.validate().map_err(|e| ConfigError::from_core("control", e))?;
            Case::controlled("inline", env, rho0, bloch_state("target", target)?, control)
        }
        None => {
            if !ctl_o.is_empty() {
                return Err(ConfigError::new("control", "requires an inline target"));
            }
            Case::free(
                "inline",
                env,
                rho0,
                doc.t_f.unwrap_or(TRANSFER_HORIZON),
                doc.dt.unwrap_or(DEFAULT_FREE_DT),
            )
        }
    };
    Ok(Scenario {
        name: "inline".into(),
        description: "scenario defined in the run configuration".into(),
        cases: vec![case],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_scenario_with_defaults() {
        let cfg = parse_config(r#"{"scenario": "free_eigen"}"#).unwrap();
        assert_eq!(cfg.scenario, find_scenario("free_eigen").unwrap());
        assert_eq!(cfg.formats, vec![Format::Csv]);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn negative_gain_is_rejected_with_path() {
        let err = parse_config(r#"{"scenario": "xfer_fwd", "control": {"g2": -1}}"#).unwrap_err();
        assert_eq!(err.path, "control.g2");
        assert_eq!(err.message, "g2 must be positive");
    }

    #[test]
    fn strong_coupling_is_rejected() {
        let err = parse_config(r#"{"env": {"alpha": 0.32}}"#).unwrap_err();
        assert_eq!(err.path, "env.alpha");
        assert!(err.message.contains("0.1024"), "{err}");
        assert!(err.message.contains("weak-coupling"), "{err}");
    }

    #[test]
    fn unknown_keys_are_errors() {
        let err = parse_config(r#"{"scenario": "free_eigen", "colour": 1}"#).unwrap_err();
        assert!(err.message.contains("unknown field `colour`"), "{err}");
        let err = parse_config(r#"{"scenario": "xfer_fwd", "control": {"gain": 1}}"#).unwrap_err();
        assert_eq!(err.path, "control.gain");
    }

    #[test]
    fn type_errors_carry_paths() {
        let err = parse_config(r#"{"scenario": "xfer_fwd", "env": {"r": "big"}}"#).unwrap_err();
        assert_eq!(err.path, "env.r");
    }

    #[test]
    fn overrides_reach_every_case() {
        let cfg = parse_config(r#"{"scenario": "r_sensitivity", "env": {"kT": 500}, "control": {"theta": 0.002}}"#).unwrap();
        for case in &cfg.scenario.cases {
            assert_eq!(case.env.kt, 500.0);
            let CaseKind::Controlled { control, .. } = &case.kind else { panic!() };
            assert_eq!(control.theta, 0.002);
        }
        // Per-case r values survive an unrelated override.
        assert_eq!(cfg.scenario.cases[0].env.r, 0.01);
    }

    #[test]
    fn control_override_on_free_scenario() {
        let err = parse_config(r#"{"scenario": "free_eigen", "control": {"g1": 2}}"#).unwrap_err();
        assert_eq!(err.path, "control");
    }

    #[test]
    fn inline_free_and_transfer() {
        let cfg = parse_config(r#"{"initial": [0, 0, -1], "t_f": 2, "dt": 0.1}"#).unwrap();
        assert!(matches!(cfg.scenario.cases[0].kind, CaseKind::Free { t_f, .. } if t_f == 2.0));

        let cfg = parse_config(r#"{"initial": [0, 0, -1], "target": [0, 0, 1], "control": {"g1": 1, "g2": 2}}"#).unwrap();
        assert!(matches!(cfg.scenario.cases[0].kind, CaseKind::Controlled { .. }));

        let err = parse_config(r#"{"initial": [0, 0, -1], "target": [0, 0, 1]}"#).unwrap_err();
        assert_eq!(err.path, "control.g1");
        let err = parse_config(r#"{"initial": [1, 1, 0]}"#).unwrap_err();
        assert_eq!(err.path, "initial");
    }

    #[test]
    fn missing_and_conflicting_sources() {
        assert_eq!(parse_config("{}").unwrap_err().path, "scenario");
        let err = parse_config(r#"{"scenario": "free_eigen", "initial": [0, 0, 1]}"#).unwrap_err();
        assert_eq!(err.path, "initial");
        let err = parse_config(r#"{"scenario": "nope"}"#).unwrap_err();
        assert!(err.message.contains("unknown scenario"));
        let err = parse_config(r#"{"scenario": "free_eigen", "formats": []}"#).unwrap_err();
        assert_eq!(err.path, "formats");
    }
}
