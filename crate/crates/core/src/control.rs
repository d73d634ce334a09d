// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Lyapunov feedback for state transfer.
//!
//! With `V = ½tr((ρ − ρ_f)²)` the time derivative splits into
//! `V̇ = f₁T₁ + f₂T₂ + C`. One field cancels the drift `C`, the other is
//! proportional to its own T-function so that `V̇ = −g·T² ≤ 0`:
//!
//! | branch | condition              | f₁         | f₂         | V̇        |
//! |--------|------------------------|------------|------------|-----------|
//! | A      | `|T₁| > θ`             | `−C/T₁`    | `−g₂T₂`    | `−g₂T₂²`  |
//! | B      | `|T₁| ≤ θ < |T₂|`      | `−g₁T₁`    | `−C/T₂`    | `−g₁T₁²`  |
//! | C      | both `≤ θ`             | 0          | 0          | `C`       |
//!
//! Branch C is where the design is inert; the loop then only checks `V`
//! against the target error and reports a stall when it stays above it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{to_bloch, QubitState};
use crate::dynamics::{dissipator_matrix, step_count, step_rk4, HamiltonianModel};
use crate::environment::{beta_t, rates, EnvironmentParams};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::trajectory::{Branch, ParamsSnapshot, RunDiagnostics, Trajectory, TrajectoryPoint};

/// Default switching threshold θ.
pub const DEFAULT_THETA: f64 = 1e-2;
/// Default target error ε.
pub const DEFAULT_EPSILON: f64 = 5e-4;
/// Default sample-and-hold period.
pub const DEFAULT_DT: f64 = 5e-4;
/// Consecutive branch-C steps above ε before a run is declared stalled.
pub const DEFAULT_STALL_STEPS: usize = 2000;
/// Largest tolerated imaginary residue of the drift trace.
pub const DRIFT_IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    pub g1: f64,
    pub g2: f64,
    pub theta: f64,
    pub epsilon: f64,
    pub dt: f64,
    pub t_f: f64,
    /// Symmetric amplitude cap; `None` leaves the analytic laws unbounded.
    pub f_max: Option<f64>,
    /// End the run at the first sample with `V ≤ ε`. When false the run
    /// continues to `t_f` and reports the minimum.
    pub stop_on_target: bool,
    pub stall_steps: usize,
}

impl ControlParams {
    pub fn new(g1: f64, g2: f64, t_f: f64) -> Result<Self> {
        let p = ControlParams {
            g1,
            g2,
            theta: DEFAULT_THETA,
            epsilon: DEFAULT_EPSILON,
            dt: DEFAULT_DT,
            t_f,
            f_max: None,
            stop_on_target: true,
            stall_steps: DEFAULT_STALL_STEPS,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, "must be positive"))
            }
        };
        positive("g1", self.g1)?;
        positive("g2", self.g2)?;
        positive("theta", self.theta)?;
        positive("epsilon", self.epsilon)?;
        positive("dt", self.dt)?;
        if !(self.t_f.is_finite() && self.t_f >= 0.0) {
            return Err(Error::invalid("t_f", "must be non-negative"));
        }
        if let Some(f_max) = self.f_max {
            positive("f_max", f_max)?;
        }
        if self.stall_steps == 0 {
            return Err(Error::invalid("stall_steps", "must be at least 1"));
        }
        Ok(())
    }
}

/// Fields chosen for one step plus the quantities they were derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlDecision {
    pub f1: f64,
    pub f2: f64,
    pub branch: Branch,
    pub t1: f64,
    pub t2: f64,
    pub drift: f64,
    pub v: f64,
    /// True if either field was clipped to `±f_max`.
    pub saturated: bool,
}

impl ControlDecision {
    /// Predicted `V̇ = f₁T₁ + f₂T₂ + C` for the chosen fields.
    pub fn v_dot(&self) -> f64 {
        self.f1 * self.t1 + self.f2 * self.t2 + self.drift
    }
}

/// `½tr((ρ_s − ρ_f)²)`, equal to `¼‖r − r_f‖²`.
pub fn lyapunov_v(rho_s: &QubitState, rho_f: &QubitState) -> f64 {
    let d = *rho_s.matrix() - *rho_f.matrix();
    0.5 * (d * d).trace().re
}

/// `(T₁, T₂) = (y_f z − z_f y, z_f x − x_f z)`.
pub fn t_functions(rho_s: &QubitState, rho_f: &QubitState) -> (f64, f64) {
    let r = to_bloch(rho_s);
    let f = to_bloch(rho_f);
    (f.y * r.z - f.z * r.y, f.z * r.x - f.x * r.z)
}

/// `T_m = tr(i[H_m, ρ_s]ρ_f)` evaluated directly from the matrices.
pub fn t_functions_trace(rho_s: &QubitState, rho_f: &QubitState) -> (f64, f64) {
    let i = Complex64::new(0.0, 1.0);
    let t = |h: Mat2| (h.commutator(rho_s.matrix()).scale(i) * *rho_f.matrix()).trace().re;
    (t(Mat2::SIGMA_X), t(Mat2::SIGMA_Y))
}

/// Control-independent part of `V̇`: `tr((L_t(ρ_s) − i[H₀, ρ_s])(ρ_s − ρ_f))`.
pub fn drift_c(
    rho_s: &QubitState,
    rho_f: &QubitState,
    env: &EnvironmentParams,
    t: f64,
) -> Result<f64> {
    let rho = rho_s.matrix();
    let k = rates(env, t);
    let h0 = HamiltonianModel::new(env.omega0).h0();
    let generator = dissipator_matrix(rho, k.delta, k.gamma) - h0.commutator(rho).scale(Complex64::new(0.0, 1.0));
    let c = (generator * (*rho - *rho_f.matrix())).trace();
    if c.im.abs() > DRIFT_IMAG_TOL {
        return Err(Error::ComplexDrift { imag: c.im });
    }
    Ok(c.re)
}

/// Three-branch feedback law evaluated at the current state.
pub fn control_step(
    rho_s: &QubitState,
    rho_f: &QubitState,
    params: &ControlParams,
    env: &EnvironmentParams,
    t: f64,
) -> Result<ControlDecision> {
    let (t1, t2) = t_functions(rho_s, rho_f);
    let drift = drift_c(rho_s, rho_f, env, t)?;
    let v = lyapunov_v(rho_s, rho_f);

    let (f1, f2, branch) = if t1.abs() > params.theta {
        (-drift / t1, -params.g2 * t2, Branch::A)
    } else if t2.abs() > params.theta {
        (-params.g1 * t1, -drift / t2, Branch::B)
    } else {
        (0.0, 0.0, Branch::C)
    };

    let (f1, f2, saturated) = match params.f_max {
        Some(cap) => {
            let (c1, c2) = (f1.clamp(-cap, cap), f2.clamp(-cap, cap));
            (c1, c2, c1 != f1 || c2 != f2)
        }
        None => (f1, f2, false),
    };

    Ok(ControlDecision {
        f1,
        f2,
        branch,
        t1,
        t2,
        drift,
        v,
        saturated,
    })
}

/// Why a controlled run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// `V ≤ ε` with `stop_on_target` set.
    Target,
    /// Reached `t_f`.
    Horizon,
    /// Too many consecutive branch-C steps with `V > ε`.
    Stall,
}

/// Branch occupancy and stall bookkeeping for a controlled run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StallReport {
    pub branch_a_steps: usize,
    pub branch_b_steps: usize,
    pub branch_c_steps: usize,
    pub longest_branch_c_run: usize,
    pub saturated_steps: usize,
    pub stalled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    pub trajectory: Trajectory,
    pub v_min: f64,
    pub t_at_v_min: f64,
    pub converged: bool,
    pub termination: Termination,
    pub stall_report: StallReport,
}

impl TransferResult {
    /// Human-readable hint when the run did not reach ε.
    pub fn advice(&self) -> Option<&'static str> {
        match (self.converged, self.termination) {
            (true, _) => None,
            (false, Termination::Stall) => {
                Some("stalled near the line through the target; re-select gains g1, g2")
            }
            (false, _) => Some("target error not reached within t_f; re-select gains g1, g2"),
        }
    }
}

/// Closed-loop transfer: recompute the feedback every `params.dt`, hold it
/// over the step, advance with RK4.
pub fn integrate_controlled(
    env: &EnvironmentParams,
    rho0: &QubitState,
    rho_f: &QubitState,
    params: &ControlParams,
) -> Result<TransferResult> {
    params.validate()?;
    let dt = params.dt;
    let steps = step_count(params.t_f, dt)?;

    let mut points = Vec::with_capacity(steps + 1);
    let mut diagnostics = RunDiagnostics::default();
    diagnostics.observe_initial(0.0, rho0);
    let mut report = StallReport::default();
    let mut c_run = 0usize;
    let (mut v_min, mut t_at_v_min) = (f64::INFINITY, 0.0);
    let mut state = *rho0;

    let termination = 'run: {
        for i in 0..=steps {
            let t = i as f64 * dt;
            let d = control_step(&state, rho_f, params, env, t)?;
            points.push(TrajectoryPoint::new(
                t,
                state,
                beta_t(env, t),
                (d.f1, d.f2),
                Some(d.v),
                d.branch,
            ));
            if d.v < v_min {
                v_min = d.v;
                t_at_v_min = t;
            }
            if d.v <= params.epsilon && params.stop_on_target {
                break 'run Termination::Target;
            }
            if i == steps {
                break 'run Termination::Horizon;
            }

            match d.branch {
                Branch::A => report.branch_a_steps += 1,
                Branch::B => report.branch_b_steps += 1,
                Branch::C | Branch::Free => report.branch_c_steps += 1,
            }
            if d.saturated {
                report.saturated_steps += 1;
            }
            if d.branch == Branch::C {
                c_run += 1;
                report.longest_branch_c_run = report.longest_branch_c_run.max(c_run);
                if d.v > params.epsilon && c_run >= params.stall_steps {
                    report.stalled = true;
                    break 'run Termination::Stall;
                }
            } else {
                c_run = 0;
            }

            let out = step_rk4(&state, t, dt, d.f1, d.f2, env);
            diagnostics.observe((i + 1) as f64 * dt, &out);
            state = out.state;
        }
        Termination::Horizon
    };

    Ok(TransferResult {
        trajectory: Trajectory {
            params: ParamsSnapshot {
                env: *env,
                dt,
                t_f: params.t_f,
                initial: to_bloch(rho0),
                target: Some(to_bloch(rho_f)),
                control: Some(*params),
            },
            points,
            diagnostics,
        },
        v_min,
        t_at_v_min,
        converged: v_min <= params.epsilon,
        termination,
        stall_report: report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{from_bloch, trace_distance, BlochVector};

    fn rho_s11() -> QubitState {
        let s = 15f64.sqrt();
        QubitState::from_real_symmetric(15.0 / 16.0, s / 16.0, 1.0 / 16.0).unwrap()
    }

    fn rho_s12() -> QubitState {
        let s = 15f64.sqrt();
        QubitState::from_real_symmetric(3.0 / 8.0, -s / 8.0, 5.0 / 8.0).unwrap()
    }

    #[test]
    fn lyapunov_examples() {
        let a = rho_s11();
        assert_eq!(lyapunov_v(&a, &a), 0.0);
        let v = lyapunov_v(&QubitState::ground_up(), &QubitState::south_pole());
        assert!((v - 1.0).abs() < 1e-15);
        assert!((lyapunov_v(&a, &rho_s12()) - 27.0 / 32.0).abs() < 1e-15);
        let d = trace_distance(&a, &rho_s12());
        assert!((lyapunov_v(&a, &rho_s12()) - d * d).abs() <= 1e-12);
    }

    #[test]
    fn t_function_examples() {
        let a = rho_s11();
        assert_eq!(t_functions(&a, &a), (0.0, 0.0));
        let (t1, t2) = t_functions(&a, &rho_s12());
        assert!(t1.abs() < 1e-15);
        assert!((t2 - 3.0 * 15f64.sqrt() / 16.0).abs() < 1e-15);
        let d1 = QubitState::from_real_symmetric(0.2, 0.0, 0.8).unwrap();
        let d2 = QubitState::from_real_symmetric(0.9, 0.0, 0.1).unwrap();
        assert_eq!(t_functions(&d1, &d2), (0.0, 0.0));
        let (u1, u2) = t_functions_trace(&a, &rho_s12());
        assert!((u1 - t1).abs() <= 1e-12 && (u2 - t2).abs() <= 1e-12);
    }

    #[test]
    fn drift_examples() {
        let env = EnvironmentParams::transfer_default();
        let (s, f) = (rho_s11(), rho_s12());
        let c0 = drift_c(&s, &f, &env, 0.0).unwrap();
        let h0 = HamiltonianModel::new(env.omega0).h0();
        let unitary = (h0.commutator(s.matrix()).scale(Complex64::new(0.0, -1.0))
            * (*s.matrix() - *f.matrix()))
        .trace()
        .re;
        assert!((c0 - unitary).abs() < 1e-15);
        assert_eq!(drift_c(&s, &s, &env, 3.0).unwrap(), 0.0);
        let closed = EnvironmentParams::new(0.0, 10.0, 300.0, 0.05).unwrap();
        let diag = QubitState::from_real_symmetric(0.3, 0.0, 0.7).unwrap();
        assert_eq!(drift_c(&diag, &f, &closed, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn first_decision_of_forward_transfer_is_branch_b() {
        let env = EnvironmentParams::transfer_default();
        let mut p = ControlParams::new(10.0, 30.0, 1.0).unwrap();
        p.theta = 0.01;
        let d = control_step(&rho_s11(), &rho_s12(), &p, &env, 0.0).unwrap();
        assert_eq!(d.branch, Branch::B);
        assert!(d.f1.abs() < 1e-14);
        assert!((d.f2 + d.drift / d.t2).abs() < 1e-15);
        assert!((d.v_dot() - (-p.g1 * d.t1 * d.t1)).abs() < 1e-12);
    }

    #[test]
    fn coincident_states_pick_branch_c() {
        let env = EnvironmentParams::transfer_default();
        let p = ControlParams::new(4.0, 12.0, 1.0).unwrap();
        let d = control_step(&rho_s12(), &rho_s12(), &p, &env, 0.4).unwrap();
        assert_eq!(d.branch, Branch::C);
        assert_eq!((d.f1, d.f2, d.v), (0.0, 0.0, 0.0));
    }

    #[test]
    fn branch_a_cancels_drift() {
        let env = EnvironmentParams::transfer_default();
        let p = ControlParams::new(4.0, 12.0, 1.0).unwrap();
        let s = from_bloch(BlochVector::new(0.2, 0.5, 0.6));
        let d = control_step(&s, &rho_s11(), &p, &env, 0.3).unwrap();
        assert_eq!(d.branch, Branch::A);
        let rhs = -p.g2 * d.t2 * d.t2;
        assert!((d.v_dot() - rhs).abs() <= 1e-12 * d.drift.abs().max(rhs.abs()));
    }

    #[test]
    fn threshold_tie_routes_to_b() {
        let env = EnvironmentParams::transfer_default();
        // T₁ = y_f z − z_f y with z = 1, y = 0 gives T₁ = y_f = θ exactly.
        let theta = 0.25;
        let mut p = ControlParams::new(4.0, 12.0, 1.0).unwrap();
        p.theta = theta;
        let s = from_bloch(BlochVector::new(0.8, 0.0, 1.0));
        let f = from_bloch(BlochVector::new(0.0, theta, 0.5));
        let d = control_step(&s, &f, &p, &env, 0.0).unwrap();
        assert_eq!(d.t1, theta);
        assert_eq!(d.branch, Branch::B);
    }

    #[test]
    fn saturation_clamps_fields() {
        let env = EnvironmentParams::transfer_default();
        let mut p = ControlParams::new(4.0, 12.0, 1.0).unwrap();
        p.f_max = Some(0.01);
        let s = from_bloch(BlochVector::new(0.2, 0.5, 0.6));
        let d = control_step(&s, &rho_s12(), &p, &env, 0.3).unwrap();
        assert!(d.saturated);
        assert!(d.f1.abs() <= 0.01 && d.f2.abs() <= 0.01);
    }

    #[test]
    fn params_validation() {
        assert!(ControlParams::new(0.0, 1.0, 1.0).is_err());
        assert!(ControlParams::new(1.0, -1.0, 1.0).is_err());
        let mut p = ControlParams::new(1.0, 1.0, 1.0).unwrap();
        p.theta = 0.0;
        assert!(p.validate().is_err());
        p.theta = 0.01;
        p.f_max = Some(-1.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn target_reached_immediately_stops() {
        let env = EnvironmentParams::transfer_default();
        let p = ControlParams::new(4.0, 12.0, 1.0).unwrap();
        let res = integrate_controlled(&env, &rho_s11(), &rho_s11(), &p).unwrap();
        assert_eq!(res.termination, Termination::Target);
        assert_eq!(res.trajectory.len(), 1);
        assert!(res.converged);
        assert_eq!(res.v_min, 0.0);
    }

    #[test]
    fn stall_detection() {
        // Target on the z axis, start on the z axis: T₁ = T₂ = 0 forever.
        let env = EnvironmentParams::transfer_default();
        let mut p = ControlParams::new(4.0, 12.0, 1.0).unwrap();
        p.stall_steps = 50;
        let res = integrate_controlled(&env, &QubitState::south_pole(), &QubitState::ground_up(), &p).unwrap();
        assert_eq!(res.termination, Termination::Stall);
        assert!(res.stall_report.stalled);
        assert_eq!(res.stall_report.longest_branch_c_run, 50);
        assert!(!res.converged);
        assert!(res.advice().is_some());
    }
}
