// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Named, parameter-frozen scenarios and their reports.
//!
//! A [`Scenario`] is a list of [`Case`]s; families such as the cut-off
//! sweep are one scenario with one case per parameter value. Running a
//! scenario is deterministic: identical inputs give bit-identical outputs.

use serde::{Deserialize, Serialize};

use crate::bloch::{to_bloch, BlochVector, QubitState};
use crate::control::{integrate_controlled, ControlParams, StallReport, Termination};
use crate::dynamics::integrate_free;
use crate::environment::{beta_t, envelope, rates, EnvironmentParams};
use crate::error::{Error, Result};
use crate::trajectory::Trajectory;

/// Horizon shared by the controlled transfer scenarios (a.u.).
pub const TRANSFER_HORIZON: f64 = 6.0;

/// What a case computes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseKind {
    /// Coefficient curves only; no state is propagated.
    Coefficients { t_max: f64, dt: f64 },
    Free {
        initial: QubitState,
        t_f: f64,
        dt: f64,
    },
    /// Closed-loop transfer; horizon and step come from `control`.
    Controlled {
        initial: QubitState,
        target: QubitState,
        control: ControlParams,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub label: String,
    pub env: EnvironmentParams,
    #[serde(flatten)]
    pub kind: CaseKind,
}

impl Case {
    pub fn coefficients(label: impl Into<String>, env: EnvironmentParams, t_max: f64, dt: f64) -> Self {
        Case {
            label: label.into(),
            env,
            kind: CaseKind::Coefficients { t_max, dt },
        }
    }

    pub fn free(label: impl Into<String>, env: EnvironmentParams, initial: QubitState, t_f: f64, dt: f64) -> Self {
        Case {
            label: label.into(),
            env,
            kind: CaseKind::Free { initial, t_f, dt },
        }
    }

    pub fn controlled(
        label: impl Into<String>,
        env: EnvironmentParams,
        initial: QubitState,
        target: QubitState,
        control: ControlParams,
    ) -> Self {
        Case {
            label: label.into(),
            env,
            kind: CaseKind::Controlled {
                initial,
                target,
                control,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, "must be positive"))
            }
        };
        match &self.kind {
            CaseKind::Coefficients { t_max, dt } => {
                positive("t_max", *t_max)?;
                positive("dt", *dt)
            }
            CaseKind::Free { initial, t_f, dt } => {
                initial.check_physical()?;
                positive("t_f", *t_f)?;
                positive("dt", *dt)
            }
            CaseKind::Controlled {
                initial,
                target,
                control,
            } => {
                initial.check_physical()?;
                target.check_physical()?;
                control.validate()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub cases: Vec<Case>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.cases.is_empty() {
            return Err(Error::InvalidScenario {
                name: self.name.clone(),
                reason: "no cases".into(),
            });
        }
        for case in &self.cases {
            case.validate().map_err(|e| Error::InvalidScenario {
                name: format!("{}/{}", self.name, case.label),
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }
}

/// Named states used by the builtin scenarios.
pub mod states {
    use super::*;

    /// `diag(0, 1)`, the South-pole eigenstate.
    pub fn rho_s01() -> QubitState {
        QubitState::south_pole()
    }

    /// `[[15/16, √15/16], [√15/16, 1/16]]`, Bloch `(√15/8, 0, 7/8)`.
    pub fn rho_s11() -> QubitState {
        let s = 15f64.sqrt();
        QubitState::from_real_symmetric(15.0 / 16.0, s / 16.0, 1.0 / 16.0).expect("valid state")
    }

    /// `[[3/8, −√15/8], [−√15/8, 5/8]]`, Bloch `(−√15/4, 0, −1/4)`.
    pub fn rho_s12() -> QubitState {
        let s = 15f64.sqrt();
        QubitState::from_real_symmetric(3.0 / 8.0, -s / 8.0, 5.0 / 8.0).expect("valid state")
    }

    /// `[[1/3, √2/3], [√2/3, 2/3]]`, initial state of the coherence sweeps.
    pub fn rho0_sweep() -> QubitState {
        let s = 2f64.sqrt();
        QubitState::from_real_symmetric(1.0 / 3.0, s / 3.0, 2.0 / 3.0).expect("valid state")
    }
}

fn env(alpha: f64, omega0: f64, kt: f64, r: f64) -> EnvironmentParams {
    EnvironmentParams::new(alpha, omega0, kt, r).expect("builtin parameters are valid")
}

/// Full-horizon transfer with threshold and sample period at their defaults.
pub fn transfer_control(g1: f64, g2: f64) -> ControlParams {
    let mut c = ControlParams::new(g1, g2, TRANSFER_HORIZON).expect("builtin gains are valid");
    c.stop_on_target = false;
    c
}

/// Gains tuned per cut-off ratio for the ρ_s12 → ρ_s11 transfer.
pub const R_SENSITIVITY_GAINS: [(f64, f64, f64); 4] =
    [(0.01, 4.0, 10.0), (0.05, 4.0, 12.0), (0.1, 4.0, 8.0), (1.0, 4.0, 80.0)];

pub fn builtin_scenarios() -> Vec<Scenario> {
    use states::*;

    let transfer_env = EnvironmentParams::transfer_default();
    let scenario = |name: &str, description: &str, cases: Vec<Case>| Scenario {
        name: name.into(),
        description: description.into(),
        cases,
    };
    let transfer = |name: &str, description: &str, from: QubitState, to: QubitState, g1: f64, g2: f64| {
        scenario(
            name,
            description,
            vec![Case::controlled(
                format!("g1={g1},g2={g2}"),
                transfer_env,
                from,
                to,
                transfer_control(g1, g2),
            )],
        )
    };

    vec![
        scenario(
            "fig1_beta",
            "decay rate β(t) for r = 0.05, 0.1, 1 (ω₀ = 1, kT = 300, α = 0.1)",
            [0.05, 0.1, 1.0]
                .iter()
                .map(|&r| Case::coefficients(format!("r={r}"), env(0.1, 1.0, 300.0, r), 50.0, 0.01))
                .collect(),
        ),
        scenario(
            "fig2_coh_purity",
            "coherence and purity from ρ₀ for r = 0.1, 1",
            [0.1, 1.0]
                .iter()
                .map(|&r| Case::free(format!("r={r}"), env(0.1, 1.0, 300.0, r), rho0_sweep(), 50.0, 0.01))
                .collect(),
        ),
        scenario(
            "fig3_alpha_sweep",
            "coherence and purity from ρ₀ for α² = 0, 0.001, 0.01, 0.05 (r = 0.1)",
            [0.0, 0.001, 0.01, 0.05]
                .iter()
                .map(|&a2: &f64| {
                    Case::free(format!("alpha2={a2}"), env(a2.sqrt(), 1.0, 300.0, 0.1), rho0_sweep(), 50.0, 0.01)
                })
                .collect(),
        ),
        scenario(
            "fig4_omega0",
            "decay rate β(t) for ω₀ = 1, 5, 10 (α = 0.1, r = 0.1, kT = 300)",
            [1.0, 5.0, 10.0]
                .iter()
                .map(|&w| Case::coefficients(format!("omega0={w}"), env(0.1, w, 300.0, 0.1), 20.0, 0.005))
                .collect(),
        ),
        scenario(
            "free_eigen",
            "free evolution from the South-pole eigenstate ρ_s01",
            vec![Case::free("rho_s01", transfer_env, rho_s01(), 600.0, 0.1)],
        ),
        scenario(
            "free_super",
            "free evolution from the superposition ρ_s11",
            vec![Case::free("rho_s11", transfer_env, rho_s11(), 600.0, 0.1)],
        ),
        transfer("xfer_fwd", "ρ_s11 → ρ_s12 with g1 = 10, g2 = 30", rho_s11(), rho_s12(), 10.0, 30.0),
        transfer("xfer_rev", "ρ_s12 → ρ_s11 with g1 = 4, g2 = 12", rho_s12(), rho_s11(), 4.0, 12.0),
        transfer("xfer_under", "ρ_s12 → ρ_s11 with undersized g2 = 2", rho_s12(), rho_s11(), 4.0, 2.0),
        transfer("xfer_over", "ρ_s12 → ρ_s11 with oversized g2 = 30", rho_s12(), rho_s11(), 4.0, 30.0),
        scenario(
            "r_sensitivity",
            "ρ_s12 → ρ_s11 across cut-off ratios with per-r gains",
            R_SENSITIVITY_GAINS
                .iter()
                .map(|&(r, g1, g2)| {
                    Case::controlled(
                        format!("r={r}"),
                        transfer_env.with_r(r),
                        rho_s12(),
                        rho_s11(),
                        transfer_control(g1, g2),
                    )
                })
                .collect(),
        ),
    ]
}

pub fn find_scenario(name: &str) -> Result<Scenario> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

/// One sample of the bath coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSample {
    pub t: f64,
    pub beta: f64,
    pub envelope: f64,
    pub gamma: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientCurve {
    pub env: EnvironmentParams,
    pub samples: Vec<CoefficientSample>,
}

/// β, Γ, γ and Δ on the uniform grid `0, dt, …, t_max`.
pub fn coefficient_curve(env: &EnvironmentParams, t_max: f64, dt: f64) -> CoefficientCurve {
    let n = (t_max / dt).round() as usize;
    let samples = (0..=n)
        .map(|i| {
            let t = i as f64 * dt;
            let k = rates(env, t);
            CoefficientSample {
                t,
                beta: beta_t(env, t),
                envelope: envelope(env, t),
                gamma: k.gamma,
                delta: k.delta,
            }
        })
        .collect();
    CoefficientCurve { env: *env, samples }
}

/// Summary metrics of one case. Every field is recomputable from the
/// emitted series.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub samples: usize,
    pub terminal_bloch: Option<BlochVector>,
    pub min_eigenvalue: Option<f64>,
    pub max_trace_defect: Option<f64>,
    pub first_nonphysical_t: Option<f64>,
    pub min_purity: Option<f64>,
    pub path_length: Option<f64>,
    pub v_min: Option<f64>,
    pub t_at_v_min: Option<f64>,
    pub converged: Option<bool>,
    pub termination: Option<Termination>,
    pub stall_report: Option<StallReport>,
    pub min_beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub label: String,
    pub metrics: Metrics,
    /// Files the series were written to; filled in by whoever writes them.
    pub series: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub cases: Vec<CaseReport>,
}

impl Report {
    pub fn is_physical(&self) -> bool {
        self.cases.iter().all(|c| c.metrics.first_nonphysical_t.is_none())
    }

    /// False if any controlled case missed its target error.
    pub fn all_converged(&self) -> bool {
        self.cases.iter().all(|c| c.metrics.converged.unwrap_or(true))
    }
}

/// In-memory series of one case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutput {
    pub label: String,
    pub curve: Option<CoefficientCurve>,
    pub trajectory: Option<Trajectory>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub report: Report,
    pub outputs: Vec<CaseOutput>,
}

fn trajectory_metrics(traj: &Trajectory) -> Metrics {
    Metrics {
        samples: traj.len(),
        terminal_bloch: traj.last().map(|p| p.bloch),
        min_eigenvalue: Some(traj.diagnostics.min_eigenvalue),
        max_trace_defect: Some(traj.diagnostics.max_trace_defect),
        first_nonphysical_t: traj.diagnostics.first_nonphysical_t,
        min_purity: traj.points.iter().map(|p| p.purity).reduce(f64::min),
        path_length: Some(traj.path_length()),
        ..Metrics::default()
    }
}

pub fn run_case(case: &Case) -> Result<(CaseReport, CaseOutput)> {
    let (metrics, curve, trajectory) = match &case.kind {
        CaseKind::Coefficients { t_max, dt } => {
            let curve = coefficient_curve(&case.env, *t_max, *dt);
            let metrics = Metrics {
                samples: curve.samples.len(),
                min_beta: curve.samples.iter().map(|s| s.beta).reduce(f64::min),
                ..Metrics::default()
            };
            (metrics, Some(curve), None)
        }
        CaseKind::Free { initial, t_f, dt } => {
            let traj = integrate_free(&case.env, initial, *t_f, *dt)?;
            (trajectory_metrics(&traj), None, Some(traj))
        }
        CaseKind::Controlled {
            initial,
            target,
            control,
        } => {
            let res = integrate_controlled(&case.env, initial, target, control)?;
            let metrics = Metrics {
                v_min: Some(res.v_min),
                t_at_v_min: Some(res.t_at_v_min),
                converged: Some(res.converged),
                termination: Some(res.termination),
                stall_report: Some(res.stall_report),
                ..trajectory_metrics(&res.trajectory)
            };
            (metrics, None, Some(res.trajectory))
        }
    };
    Ok((
        CaseReport {
            label: case.label.clone(),
            metrics,
            series: Vec::new(),
        },
        CaseOutput {
            label: case.label.clone(),
            curve,
            trajectory,
        },
    ))
}

/// Runs every case of `scenario` in order.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioRun> {
    scenario.validate()?;
    let mut cases = Vec::with_capacity(scenario.cases.len());
    let mut outputs = Vec::with_capacity(scenario.cases.len());
    for case in &scenario.cases {
        let (report, output) = run_case(case)?;
        cases.push(report);
        outputs.push(output);
    }
    Ok(ScenarioRun {
        report: Report {
            scenario: scenario.name.clone(),
            cases,
        },
        outputs,
    })
}

/// Initial Bloch vector of a case, if it propagates a state.
pub fn initial_bloch(case: &Case) -> Option<BlochVector> {
    match &case.kind {
        CaseKind::Coefficients { .. } => None,
        CaseKind::Free { initial, .. } | CaseKind::Controlled { initial, .. } => Some(to_bloch(initial)),
    }
}
