// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation and Lyapunov control of a weakly coupled qubit in a
//! high-temperature Ohmic bath, described by a time-convolutionless master
//! equation with time-dependent decay rates.
//!
//! Modules, bottom-up:
//!
//! * [`bloch`]: density matrices, Bloch vectors, purity, coherence.
//! * [`environment`]: closed-form bath coefficients γ(t), Δ(t), β(t).
//! * [`dynamics`]: master-equation right-hand side, RK4, free runs.
//! * [`control`]: Lyapunov function, feedback law, controlled runs.
//! * [`scenario`]: frozen scenario registry and report generation.
//! * [`acceptance`]: executable acceptance criteria.

pub mod acceptance;
pub mod bloch;
pub mod control;
pub mod dynamics;
pub mod environment;
pub mod error;
pub mod linalg;
pub mod scenario;
pub mod trajectory;

pub use acceptance::{acceptance_suite, run_criterion, CriterionResult};
pub use bloch::{
    coherence, from_bloch, from_bloch_strict, purity, to_bloch, trace_distance, BlochVector,
    QubitState,
};
pub use control::{
    control_step, drift_c, integrate_controlled, lyapunov_v, t_functions, ControlDecision,
    ControlParams, StallReport, Termination, TransferResult,
};
pub use dynamics::{
    dissipator, equilibrium_state, integrate_free, purity_rate_diagnostic, rhs, step_rk4,
    HamiltonianModel, PurityRateSample, StepOutcome,
};
pub use environment::{
    beta_t, delta_ht, envelope, gamma_t, markovian_crossover, steady_rates, EnvironmentParams,
    SteadyRates,
};
pub use error::{Error, Result};
pub use linalg::Mat2;
pub use trajectory::{Branch, ParamsSnapshot, RunDiagnostics, Trajectory, TrajectoryPoint};
pub use scenario::{builtin_scenarios, find_scenario, run_scenario, Case, CaseKind, Report, Scenario};
