// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Master-equation right-hand side and its fixed-step propagation.
//!
//! ```text
//! ρ̇ = −i[H₀ + f₁σ_x + f₂σ_y, ρ] + L_t(ρ),   H₀ = ω₀σ_z/2
//! L_t(ρ) = β₁(t)([σ₋ρ, σ₊] + [σ₋, ρσ₊]) + β₂(t)([σ₊ρ, σ₋] + [σ₊, ρσ₋])
//! ```
//!
//! with `β₁,₂ = (Δ ± γ)/2`. Controls are held constant over each step.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{from_bloch, purity, to_bloch, BlochVector, QubitState, POSITIVITY_TOL};
use crate::environment::{beta_t, rates, EnvironmentParams};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::trajectory::{Branch, ParamsSnapshot, RunDiagnostics, Trajectory, TrajectoryPoint};

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// System Hamiltonian `ω₀σ_z/2` with control generators `σ_x`, `σ_y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianModel {
    pub omega0: f64,
}

impl HamiltonianModel {
    pub fn new(omega0: f64) -> Self {
        HamiltonianModel { omega0 }
    }

    pub fn h0(&self) -> Mat2 {
        Mat2::SIGMA_Z * (0.5 * self.omega0)
    }

    pub fn h1(&self) -> Mat2 {
        Mat2::SIGMA_X
    }

    pub fn h2(&self) -> Mat2 {
        Mat2::SIGMA_Y
    }

    /// `H₀ + f₁H₁ + f₂H₂`.
    pub fn hamiltonian(&self, f1: f64, f2: f64) -> Mat2 {
        Mat2::new(
            Complex64::new(0.5 * self.omega0, 0.0),
            Complex64::new(f1, -f2),
            Complex64::new(f1, f2),
            Complex64::new(-0.5 * self.omega0, 0.0),
        )
    }
}

/// Bath term `L_t(ρ)` for given diffusion `delta` and dissipation `gamma`.
pub fn dissipator(rho: &QubitState, delta: f64, gamma: f64) -> Mat2 {
    dissipator_matrix(rho.matrix(), delta, gamma)
}

#[inline]
pub(crate) fn dissipator_matrix(rho: &Mat2, delta: f64, gamma: f64) -> Mat2 {
    let (lower, raise) = (Mat2::SIGMA_MINUS, Mat2::SIGMA_PLUS);
    let decay = (lower * *rho).commutator(&raise) + lower.commutator(&(*rho * raise));
    let excite = (raise * *rho).commutator(&lower) + raise.commutator(&(*rho * lower));
    decay * (0.5 * (delta + gamma)) + excite * (0.5 * (delta - gamma))
}

#[inline]
fn rhs_matrix(rho: &Mat2, t: f64, f1: f64, f2: f64, env: &EnvironmentParams) -> Mat2 {
    let h = HamiltonianModel::new(env.omega0).hamiltonian(f1, f2);
    let k = rates(env, t);
    h.commutator(rho).scale(MINUS_I) + dissipator_matrix(rho, k.delta, k.gamma)
}

/// `ρ̇` at time `t` with fields `f1`, `f2`.
pub fn rhs(rho: &QubitState, t: f64, f1: f64, f2: f64, env: &EnvironmentParams) -> Mat2 {
    rhs_matrix(rho.matrix(), t, f1, f2, env)
}

/// Result of one integration step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: QubitState,
    /// `|tr ρ − 1|` of the raw RK4 update.
    pub trace_defect: f64,
    /// `‖ρ − ρ†‖_F` of the raw RK4 update.
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
}

impl StepOutcome {
    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= POSITIVITY_TOL
    }
}

/// Classical RK4 step with fields held over `[t, t + dt]`, followed by
/// re-Hermitization and trace renormalization. Positivity is reported,
/// never enforced.
pub fn step_rk4(
    rho: &QubitState,
    t: f64,
    dt: f64,
    f1: f64,
    f2: f64,
    env: &EnvironmentParams,
) -> StepOutcome {
    let raw = rk4_raw(rho.matrix(), t, dt, f1, f2, env);
    finish_step(raw)
}

#[inline]
fn rk4_raw(y: &Mat2, t: f64, dt: f64, f1: f64, f2: f64, env: &EnvironmentParams) -> Mat2 {
    let half = 0.5 * dt;
    let k1 = rhs_matrix(y, t, f1, f2, env);
    let k2 = rhs_matrix(&(*y + k1 * half), t + half, f1, f2, env);
    let k3 = rhs_matrix(&(*y + k2 * half), t + half, f1, f2, env);
    let k4 = rhs_matrix(&(*y + k3 * dt), t + dt, f1, f2, env);
    *y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

fn finish_step(raw: Mat2) -> StepOutcome {
    let hermiticity_defect = raw.hermiticity_defect();
    let herm = raw.hermitian_part();
    let tr = herm.trace().re;
    let state = QubitState::from_matrix_unchecked(herm * (1.0 / tr));
    StepOutcome {
        state,
        trace_defect: (tr - 1.0).abs(),
        hermiticity_defect,
        min_eigenvalue: state.min_eigenvalue(),
    }
}

impl RunDiagnostics {
    pub(crate) fn observe_initial(&mut self, t: f64, state: &QubitState) {
        let min_eig = state.min_eigenvalue();
        self.min_eigenvalue = self.min_eigenvalue.min(min_eig);
        if min_eig < POSITIVITY_TOL && self.first_nonphysical_t.is_none() {
            self.first_nonphysical_t = Some(t);
        }
    }

    pub(crate) fn observe(&mut self, t: f64, step: &StepOutcome) {
        self.max_trace_defect = self.max_trace_defect.max(step.trace_defect);
        self.max_hermiticity_defect = self.max_hermiticity_defect.max(step.hermiticity_defect);
        self.min_eigenvalue = self.min_eigenvalue.min(step.min_eigenvalue);
        if !step.is_physical() && self.first_nonphysical_t.is_none() {
            self.first_nonphysical_t = Some(t);
        }
    }
}

/// Number of uniform steps covering `[0, t_f]`.
pub(crate) fn step_count(t_f: f64, dt: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    if !(t_f.is_finite() && t_f >= 0.0) {
        return Err(Error::invalid("t_f", "must be non-negative"));
    }
    Ok((t_f / dt).round() as usize)
}

/// Uncontrolled evolution sampled at every integration step.
pub fn integrate_free(
    env: &EnvironmentParams,
    rho0: &QubitState,
    t_f: f64,
    dt: f64,
) -> Result<Trajectory> {
    let steps = step_count(t_f, dt)?;
    let mut points = Vec::with_capacity(steps + 1);
    let mut diagnostics = RunDiagnostics::default();
    diagnostics.observe_initial(0.0, rho0);

    let mut state = *rho0;
    for i in 0..=steps {
        let t = i as f64 * dt;
        points.push(TrajectoryPoint::new(
            t,
            state,
            beta_t(env, t),
            (0.0, 0.0),
            None,
            Branch::Free,
        ));
        if i < steps {
            let out = step_rk4(&state, t, dt, 0.0, 0.0, env);
            diagnostics.observe((i + 1) as f64 * dt, &out);
            state = out.state;
        }
    }

    Ok(Trajectory {
        params: ParamsSnapshot {
            env: *env,
            dt,
            t_f,
            initial: to_bloch(rho0),
            target: None,
            control: None,
        },
        points,
        diagnostics,
    })
}

/// Propagates a zero-order-hold field schedule: `fields[k]` is applied on
/// `[k·hold, (k+1)·hold]`, integrated with `substeps` RK4 steps per hold.
pub fn integrate_schedule(
    env: &EnvironmentParams,
    rho0: &QubitState,
    fields: &[(f64, f64)],
    hold: f64,
    substeps: usize,
) -> Result<QubitState> {
    if !(hold.is_finite() && hold > 0.0) {
        return Err(Error::invalid("hold", "must be positive"));
    }
    if substeps == 0 {
        return Err(Error::invalid("substeps", "must be at least 1"));
    }
    let dt = hold / substeps as f64;
    let mut state = *rho0;
    for (k, &(f1, f2)) in fields.iter().enumerate() {
        let t0 = k as f64 * hold;
        for j in 0..substeps {
            state = step_rk4(&state, t0 + j as f64 * dt, dt, f1, f2, env).state;
        }
    }
    Ok(state)
}

/// Long-time fixed point of the free dynamics, `z = −γ_M/Δ_M = −ω₀/(2kT)`.
pub fn equilibrium_state(env: &EnvironmentParams) -> QubitState {
    from_bloch(BlochVector::new(0.0, 0.0, -env.omega0 / (2.0 * env.kt)))
}

/// `K = ‖ρσ₋ − σ₋ρ‖²_F`, the state factor in the purity-rate approximation.
pub fn purity_rate_factor(rho: &QubitState) -> f64 {
    let m = rho.matrix();
    (*m * Mat2::SIGMA_MINUS - Mat2::SIGMA_MINUS * *m).frobenius_norm_sqr()
}

/// Exact `dP/dt = 2 tr(ρ ρ̇)` for fields `f1`, `f2`.
pub fn purity_rate(rho: &QubitState, t: f64, f1: f64, f2: f64, env: &EnvironmentParams) -> f64 {
    2.0 * (*rho.matrix() * rhs(rho, t, f1, f2, env)).trace().re
}

/// One row of [`purity_rate_diagnostic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurityRateSample {
    pub t: f64,
    /// Central difference of the sampled purity.
    pub dp_dt: f64,
    /// `−4Kβ(t)`.
    pub predicted: f64,
    pub beta: f64,
    pub k: f64,
}

/// Compares the sampled purity slope with `−4Kβ(t)` at every interior sample.
pub fn purity_rate_diagnostic(traj: &Trajectory, env: &EnvironmentParams) -> Vec<PurityRateSample> {
    traj.points
        .windows(3)
        .map(|w| {
            let (prev, mid, next) = (&w[0], &w[1], &w[2]);
            let beta = beta_t(env, mid.t);
            let k = purity_rate_factor(&mid.state);
            PurityRateSample {
                t: mid.t,
                dp_dt: (purity(&next.state) - purity(&prev.state)) / (next.t - prev.t),
                predicted: -4.0 * k * beta,
                beta,
                k,
            }
        })
        .collect()
}
