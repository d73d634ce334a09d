// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{Map, Value};
use tclq_core::acceptance::{relaxation_check, run_criterion, ACCEPTANCE_SEED, CRITERIA};
use tclq_core::scenario::{coefficient_curve, run_case, ScenarioRun};
use tclq_core::{find_scenario, CaseKind, CriterionResult, EnvironmentParams, Report, Scenario};

use crate::config::{parse_config_value, ConfigError, Format, RunConfig};
use crate::emit::{write_coefficients_csv, EmitError};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    /// Missed convergence (with `--require-converged`) or a failed check.
    Failure = 1,
    /// Invalid arguments, configuration or output location.
    Config = 2,
    /// A run left the physical state space.
    NonPhysical = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error at {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Emit(#[from] EmitError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("simulation error: {0}")]
    Core(#[from] tclq_core::Error),
    #[error("write error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Core(_) => Exit::Failure,
            _ => Exit::Config,
        }
    }

    /// True when the reader of stdout went away (e.g. `tclq coeffs | head`).
    pub fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io(e) => Some(e),
            CliError::Emit(EmitError::Csv(e)) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    }
}

/// Reads an optional JSON config file and lays `overrides` over its top-level keys.
pub fn load_config(path: Option<&Path>, overrides: Map<String, Value>) -> Result<RunConfig, CliError> {
    let mut doc = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| CliError::Read {
                path: p.to_path_buf(),
                source,
            })?;
            let value: Value = serde_json::from_str(&text).map_err(|e| ConfigError {
                path: ".".into(),
                message: format!("malformed JSON: {e}"),
            })?;
            match value {
                Value::Object(m) => m,
                _ => {
                    return Err(ConfigError {
                        path: ".".into(),
                        message: "the document must be a JSON object".into(),
                    }
                    .into())
                }
            }
        }
        None => Map::new(),
    };
    for (k, v) in overrides {
        if k == "scenario" {
            doc.remove("initial");
            doc.remove("target");
        }
        doc.insert(k, v);
    }
    Ok(parse_config_value(Value::Object(doc))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Free,
    Control,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub require_converged: bool,
    pub allow_nonphysical: bool,
}

fn check_mode(scenario: &Scenario, mode: Mode) -> Result<(), CliError> {
    let controlled = scenario
        .cases
        .iter()
        .filter(|c| matches!(c.kind, CaseKind::Controlled { .. }))
        .count();
    match mode {
        Mode::Free if controlled > 0 => Err(CliError::Usage(format!(
            "scenario `{}` contains controlled cases; use `tclq control`",
            scenario.name
        ))),
        Mode::Control if controlled < scenario.cases.len() => Err(CliError::Usage(format!(
            "scenario `{}` has uncontrolled cases; use `tclq free`",
            scenario.name
        ))),
        _ => Ok(()),
    }
}

/// One human-readable summary line per case.
pub fn summary_lines(report: &Report) -> Vec<String> {
    report
        .cases
        .iter()
        .map(|c| {
            let m = &c.metrics;
            let head = format!("{}/{}", report.scenario, c.label);
            if let (Some(v), Some(t)) = (m.v_min, m.t_at_v_min) {
                format!(
                    "{head}: V_min={v:.4e}, t={t:.4}, converged={}, termination={}",
                    m.converged.unwrap_or(false),
                    m.termination.map_or("?".to_string(), |t| format!("{t:?}").to_lowercase())
                )
            } else if let Some(b) = m.terminal_bloch {
                format!(
                    "{head}: terminal=({:.6}, {:.6}, {:.6}), min_purity={:.6}, min_eigenvalue={:.3e}",
                    b.x,
                    b.y,
                    b.z,
                    m.min_purity.unwrap_or(f64::NAN),
                    m.min_eigenvalue.unwrap_or(f64::NAN)
                )
            } else {
                format!("{head}: samples={}, min_beta={:.6e}", m.samples, m.min_beta.unwrap_or(f64::NAN))
            }
        })
        .collect()
}

/// Emits the run, prints summaries and derives the exit status.
fn finish(
    run: &ScenarioRun,
    cfg_dir: &Path,
    formats: &[Format],
    mode: Option<Mode>,
    opts: RunOptions,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let report = crate::emit::emit_scenario(run, cfg_dir, formats)?;
    for line in summary_lines(&report) {
        writeln!(out, "{line}")?;
    }
    for c in &report.cases {
        if c.metrics.converged == Some(false) {
            if let Some(stall) = c.metrics.stall_report.filter(|s| s.stalled) {
                log::warn!(
                    "{}/{}: stalled after {} consecutive threshold steps",
                    report.scenario,
                    c.label,
                    stall.longest_branch_c_run
                );
            }
            log::info!(
                "{}/{}: target error not reached; re-select gains g1, g2",
                report.scenario,
                c.label
            );
        }
    }
    log::info!("outputs written to {}", cfg_dir.display());

    if !report.is_physical() {
        for c in &report.cases {
            if let Some(t) = c.metrics.first_nonphysical_t {
                eprintln!(
                    "error: {}/{} left the physical state space at t = {t} (min eigenvalue {:.3e})",
                    report.scenario,
                    c.label,
                    c.metrics.min_eigenvalue.unwrap_or(f64::NAN)
                );
            }
        }
        if !opts.allow_nonphysical {
            return Ok(Exit::NonPhysical);
        }
    }
    if mode == Some(Mode::Control) && opts.require_converged && !report.all_converged() {
        eprintln!("error: at least one transfer did not reach its target error");
        return Ok(Exit::Failure);
    }
    Ok(Exit::Success)
}

/// `free` and `control`: run a configured scenario sequentially.
pub fn run_configured(cfg: &RunConfig, mode: Mode, opts: RunOptions, out: &mut dyn Write) -> Result<Exit, CliError> {
    check_mode(&cfg.scenario, mode)?;
    let run = tclq_core::run_scenario(&cfg.scenario)?;
    finish(&run, &cfg.output_dir, &cfg.formats, Some(mode), opts, out)
}

/// Scenario families accepted by `sweep`.
pub const SWEEP_FAMILIES: [(&str, &str); 3] = [
    ("fig2", "fig2_coh_purity"),
    ("fig3", "fig3_alpha_sweep"),
    ("r_sensitivity", "r_sensitivity"),
];

/// `sweep`: run every case of a family on the worker pool.
pub fn sweep(family: &str, dir: &Path, formats: &[Format], opts: RunOptions, out: &mut dyn Write) -> Result<Exit, CliError> {
    let name = SWEEP_FAMILIES
        .iter()
        .find(|(f, n)| *f == family || *n == family)
        .map(|(_, n)| *n)
        .ok_or_else(|| {
            let known: Vec<&str> = SWEEP_FAMILIES.iter().map(|(f, _)| *f).collect();
            CliError::Usage(format!("unknown sweep family `{family}` (expected one of {})", known.join(", ")))
        })?;
    let scenario = find_scenario(name)?;
    scenario.validate()?;
    let results = scenario
        .cases
        .par_iter()
        .map(run_case)
        .collect::<Result<Vec<_>, _>>()?;
    let (cases, outputs) = results.into_iter().unzip();
    let run = ScenarioRun {
        report: Report {
            scenario: scenario.name.clone(),
            cases,
        },
        outputs,
    };
    finish(&run, dir, formats, None, opts, out)
}

/// `coeffs`: β and its envelope, optionally γ and Δ, on a uniform grid.
pub fn coeffs(env: &EnvironmentParams, t_max: f64, dt: f64, with_rates: bool, out: &mut dyn Write) -> Result<Exit, CliError> {
    env.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if !(t_max > 0.0 && t_max.is_finite()) || !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::Usage("--tmax and --dt must be positive".into()));
    }
    let curve = coefficient_curve(env, t_max, dt);
    write_coefficients_csv(&curve, with_rates, out)?;
    Ok(Exit::Success)
}

/// `list`: one line per builtin scenario.
pub fn list(out: &mut dyn Write) -> Result<Exit, CliError> {
    for s in tclq_core::builtin_scenarios() {
        writeln!(out, "{:<18} {:>2} case(s)  {}", s.name, s.cases.len(), s.description)?;
    }
    Ok(Exit::Success)
}

/// `check`: the acceptance suite plus a random-state relaxation check.
pub fn check(ids: &[u8], random_states: usize, json: bool, out: &mut dyn Write) -> Result<Exit, CliError> {
    for id in ids {
        if !CRITERIA.iter().any(|(i, _)| i == id) {
            return Err(CliError::Usage(format!("no acceptance criterion {id} (expected 1–{})", CRITERIA.len())));
        }
    }
    let selected: Vec<u8> = if ids.is_empty() {
        CRITERIA.iter().map(|(i, _)| *i).collect()
    } else {
        ids.to_vec()
    };
    let mut results: Vec<CriterionResult> = selected.par_iter().map(|&id| run_criterion(id)).collect();
    if random_states > 0 && ids.is_empty() {
        results.push(relaxation_check(random_states, ACCEPTANCE_SEED));
    }
    if json {
        serde_json::to_writer_pretty(&mut *out, &results).map_err(EmitError::from)?;
        writeln!(out)?;
    } else {
        for r in &results {
            writeln!(out, "{r}")?;
        }
        let passed = results.iter().filter(|r| r.passed).count();
        writeln!(out, "{passed}/{} passed", results.len())?;
    }
    Ok(if results.iter().all(|r| r.passed) {
        Exit::Success
    } else {
        Exit::Failure
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn obj(v: Value) -> Map<String, Value> {
        match v {
            Value::Object(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn flag_overrides_replace_inline_definition() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"initial": [0, 0, 1], "output_dir": "x"}"#).unwrap();
        let cfg = load_config(Some(&path), obj(json!({"scenario": "free_eigen"}))).unwrap();
        assert_eq!(cfg.scenario.name, "free_eigen");
        assert_eq!(cfg.output_dir, PathBuf::from("x"));
    }

    #[test]
    fn malformed_file_is_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, "[1, 2").unwrap();
        let err = load_config(Some(&path), Map::new()).unwrap_err();
        assert_eq!(err.exit(), Exit::Config);
        let err = load_config(Some(&dir.path().join("missing.json")), Map::new()).unwrap_err();
        assert_eq!(err.exit(), Exit::Config);
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let cfg = load_config(None, obj(json!({"scenario": "xfer_fwd"}))).unwrap();
        let mut sink = Vec::new();
        let err = run_configured(&cfg, Mode::Free, RunOptions::default(), &mut sink).unwrap_err();
        assert_eq!(err.exit(), Exit::Config);
    }

    #[test]
    fn coeffs_writes_three_columns() {
        let env = EnvironmentParams::new(0.1, 1.0, 300.0, 0.05).unwrap();
        let mut buf = Vec::new();
        coeffs(&env, 1.0, 0.5, false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("t,beta,envelope\n0.0,"));
    }

    #[test]
    fn unknown_family_and_criterion() {
        let mut sink = Vec::new();
        let dir = tempfile::tempdir().unwrap();
        let err = sweep("fig9", dir.path(), &[Format::Csv], RunOptions::default(), &mut sink).unwrap_err();
        assert_eq!(err.exit(), Exit::Config);
        let err = check(&[13], 0, false, &mut sink).unwrap_err();
        assert_eq!(err.exit(), Exit::Config);
    }
}
