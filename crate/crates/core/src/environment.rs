// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Ohmic-bath coefficients of the high-temperature TCL master equation.
//!
//! Units: ħ = k_B = 1, time in a.u., and `kT` is an energy in the same
//! units as `ω₀`. All functions are closed-form and pure.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on α² accepted as weak coupling.
pub const MAX_ALPHA_SQ: f64 = 0.05;

/// Below `kT = HIGH_TEMPERATURE_RATIO · ω₀` the high-temperature
/// diffusion coefficient is a poor approximation; construction logs a warning.
pub const HIGH_TEMPERATURE_RATIO: f64 = 10.0;

/// Bath coupling and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentParams {
    /// Coupling constant α.
    pub alpha: f64,
    /// Transition frequency ω₀.
    pub omega0: f64,
    /// Temperature as an energy.
    #[serde(rename = "kT")]
    pub kt: f64,
    /// Cut-off ratio ω_c/ω₀.
    pub r: f64,
}

impl EnvironmentParams {
    /// Validated constructor. `alpha = 0` is accepted and describes the
    /// closed (uncoupled) system.
    pub fn new(alpha: f64, omega0: f64, kt: f64, r: f64) -> Result<Self> {
        let env = EnvironmentParams { alpha, omega0, kt, r };
        env.validate()?;
        Ok(env)
    }

    /// Parameters used for the free and controlled runs:
    /// r = 0.05, ω₀ = 10, kT = 30ω₀, α = 0.1.
    pub fn transfer_default() -> Self {
        EnvironmentParams {
            alpha: 0.1,
            omega0: 10.0,
            kt: 300.0,
            r: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid("alpha", "must be non-negative"));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::invalid("omega0", "must be positive"));
        }
        if !(self.kt.is_finite() && self.kt > 0.0) {
            return Err(Error::invalid("kT", "must be positive"));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(Error::invalid("r", "must be positive"));
        }
        let alpha_sq = self.alpha_sq();
        if alpha_sq > MAX_ALPHA_SQ {
            return Err(Error::CouplingTooStrong {
                alpha_sq,
                bound: MAX_ALPHA_SQ,
            });
        }
        if self.kt < HIGH_TEMPERATURE_RATIO * self.omega0 {
            log::warn!(
                "kT = {} is below {}·ω₀ = {}; the high-temperature coefficients may be inaccurate",
                self.kt,
                HIGH_TEMPERATURE_RATIO,
                HIGH_TEMPERATURE_RATIO * self.omega0
            );
        }
        Ok(())
    }

    #[inline]
    pub fn alpha_sq(&self) -> f64 {
        self.alpha * self.alpha
    }

    /// ω_c = r·ω₀.
    #[inline]
    pub fn omega_c(&self) -> f64 {
        self.r * self.omega0
    }

    #[inline]
    fn cutoff_weight(&self) -> f64 {
        self.r * self.r / (1.0 + self.r * self.r)
    }

    pub fn with_r(self, r: f64) -> Self {
        EnvironmentParams { r, ..self }
    }
}

/// Dissipation and diffusion coefficients at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub gamma: f64,
    pub delta: f64,
}

impl Rates {
    /// β₁ = (Δ + γ)/2, weight of the σ₋ (decay) channel.
    pub fn beta1(&self) -> f64 {
        0.5 * (self.delta + self.gamma)
    }

    /// β₂ = (Δ − γ)/2, weight of the σ₊ (excitation) channel.
    pub fn beta2(&self) -> f64 {
        0.5 * (self.delta - self.gamma)
    }
}

/// γ(t) and Δ^HT(t) sharing one evaluation of the damped oscillation.
#[inline]
pub fn rates(env: &EnvironmentParams, t: f64) -> Rates {
    let w = env.cutoff_weight();
    let damp = (-env.omega_c() * t).exp();
    let (s, c) = (env.omega0 * t).sin_cos();
    let a2 = env.alpha_sq();
    Rates {
        gamma: a2 * env.omega0 * w * (1.0 - damp * (c + env.r * s)),
        delta: 2.0 * a2 * env.kt * w * (1.0 - damp * (c - s / env.r)),
    }
}

/// Dissipation coefficient γ(t).
pub fn gamma_t(env: &EnvironmentParams, t: f64) -> f64 {
    rates(env, t).gamma
}

/// High-temperature diffusion coefficient Δ^HT(t).
pub fn delta_ht(env: &EnvironmentParams, t: f64) -> f64 {
    rates(env, t).delta
}

/// Decay rate β(t) in phase-shifted form. Algebraically `Δ^HT(t)/2`.
pub fn beta_t(env: &EnvironmentParams, t: f64) -> f64 {
    let a2kt = env.alpha_sq() * env.kt;
    let hyp = (1.0 + env.r * env.r).sqrt();
    a2kt * env.cutoff_weight()
        + a2kt * (env.r / hyp) * (-env.omega_c() * t).exp() * (env.omega0 * t - env.r.atan()).sin()
}

/// Envelope Γ(t) bounding the oscillation of β(t) from above.
pub fn envelope(env: &EnvironmentParams, t: f64) -> f64 {
    let a2kt = env.alpha_sq() * env.kt;
    let hyp = (1.0 + env.r * env.r).sqrt();
    a2kt * env.cutoff_weight() + a2kt * (env.r / hyp) * (-env.omega_c() * t).exp()
}

/// Long-time limits of the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyRates {
    pub gamma_m: f64,
    pub delta_m: f64,
    pub beta_m: f64,
}

pub fn steady_rates(env: &EnvironmentParams) -> SteadyRates {
    let w = env.cutoff_weight();
    let a2 = env.alpha_sq();
    let delta_m = 2.0 * a2 * env.kt * w;
    SteadyRates {
        gamma_m: a2 * env.omega0 * w,
        delta_m,
        beta_m: 0.5 * delta_m,
    }
}

/// First time at which the envelope lies within `rel_tol · β_M` of β_M.
///
/// Returns `None` for a closed system (β_M = 0).
pub fn settling_time(env: &EnvironmentParams, rel_tol: f64) -> Option<f64> {
    let beta_m = steady_rates(env).beta_m;
    if beta_m <= 0.0 || rel_tol <= 0.0 {
        return None;
    }
    let amplitude = env.alpha_sq() * env.kt * env.r / (1.0 + env.r * env.r).sqrt();
    let t = (amplitude / (rel_tol * beta_m)).ln() / env.omega_c();
    Some(t.max(0.0))
}

/// Number of grid points used by [`min_beta`].
pub const CROSSOVER_GRID_POINTS: usize = 100_000;
/// Number of oscillation periods scanned by [`min_beta`].
pub const CROSSOVER_PERIODS: f64 = 20.0;
/// Bisection tolerance in r.
pub const CROSSOVER_TOL: f64 = 1e-4;

/// Minimum of β(t) over `t ∈ (0, 20·2π/ω₀]`.
///
/// The grid excludes `t = 0`, where β vanishes identically and rounding
/// would otherwise make every `r` look non-Markovian. The local minima of
/// β sit at `ω₀t = 3π/2 + 2πk` and are added as exact candidates.
pub fn min_beta(env: &EnvironmentParams) -> f64 {
    let t_max = CROSSOVER_PERIODS * 2.0 * PI / env.omega0;
    let h = t_max / CROSSOVER_GRID_POINTS as f64;
    let grid = (1..=CROSSOVER_GRID_POINTS).map(|i| i as f64 * h);
    let candidates =
        (0..CROSSOVER_PERIODS as usize).map(|k| (1.5 * PI + 2.0 * PI * k as f64) / env.omega0);
    grid.chain(candidates)
        .map(|t| beta_t(env, t))
        .fold(f64::INFINITY, f64::min)
}

/// Smallest cut-off ratio for which β(t) never turns negative.
///
/// Bisects on `r` between `r_lo` (must show a negative β lobe) and `r_hi`
/// (must not). α and kT only scale β, so the result depends on ω₀ alone
/// through the time grid and not at all in exact arithmetic.
pub fn markovian_crossover(template: &EnvironmentParams, r_lo: f64, r_hi: f64) -> Result<f64> {
    let m = |r: f64| min_beta(&template.with_r(r));
    let (m_lo, m_hi) = (m(r_lo), m(r_hi));
    if !(r_lo < r_hi && m_lo < 0.0 && m_hi >= 0.0) {
        return Err(Error::CrossoverNotBracketed {
            r_lo,
            r_hi,
            m_lo,
            m_hi,
        });
    }
    let (mut lo, mut hi) = (r_lo, r_hi);
    while hi - lo > CROSSOVER_TOL {
        let mid = 0.5 * (lo + hi);
        if m(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1(r: f64) -> EnvironmentParams {
        EnvironmentParams::new(0.1, 1.0, 300.0, r).unwrap()
    }

    fn rel_close(a: f64, b: f64, rel: f64) {
        assert!((a - b).abs() <= rel * b.abs(), "{a} vs {b}");
    }

    #[test]
    fn validation() {
        assert!(EnvironmentParams::new(0.0, 1.0, 300.0, 0.1).is_ok());
        assert!(EnvironmentParams::new(-0.1, 1.0, 300.0, 0.1).is_err());
        assert!(EnvironmentParams::new(0.1, 0.0, 300.0, 0.1).is_err());
        assert!(EnvironmentParams::new(0.1, 1.0, -1.0, 0.1).is_err());
        assert!(EnvironmentParams::new(0.1, 1.0, 300.0, 0.0).is_err());
        assert!(EnvironmentParams::new(0.05f64.sqrt(), 1.0, 300.0, 0.1).is_ok());
        assert!(matches!(
            EnvironmentParams::new(0.32, 1.0, 300.0, 0.1),
            Err(Error::CouplingTooStrong { .. })
        ));
    }

    #[test]
    fn zero_time() {
        let env = EnvironmentParams::transfer_default();
        assert_eq!(gamma_t(&env, 0.0), 0.0);
        assert_eq!(delta_ht(&env, 0.0), 0.0);
        assert!(beta_t(&env, 0.0).abs() <= 1e-14 * env.alpha_sq() * env.kt);
    }

    #[test]
    fn steady_values_at_transfer_params() {
        let env = EnvironmentParams::transfer_default();
        let s = steady_rates(&env);
        // 0.01·10·0.0025/1.0025 and 2·0.01·300·0.0025/1.0025
        rel_close(s.gamma_m, 2.493765586034913e-4, 1e-12);
        rel_close(s.delta_m, 1.4962593516209476e-2, 1e-12);
        rel_close(s.beta_m, 7.481296758104738e-3, 1e-12);
        assert!((gamma_t(&env, 1e6) - s.gamma_m).abs() <= 1e-12);
        assert!((delta_ht(&env, 1e6) - s.delta_m).abs() <= 1e-12);
        rel_close(s.gamma_m / s.delta_m, 1.0 / 60.0, 1e-12);
    }

    #[test]
    fn large_cutoff_limit() {
        let env = EnvironmentParams::new(0.1, 10.0, 300.0, 1e6).unwrap();
        rel_close(steady_rates(&env).gamma_m, 0.01 * 10.0, 1e-10);
    }

    #[test]
    fn gamma_at_pi() {
        // 0.01·0.5·(1 − e^{−π}·(−1))
        let expected = 0.005 * (1.0 + (-PI).exp());
        rel_close(gamma_t(&fig1(1.0), PI), expected, 1e-12);
        rel_close(expected, 5.2160e-3, 1e-4);
    }

    #[test]
    fn beta_is_half_delta() {
        for r in [0.01, 0.05, 0.274, 1.0, 3.0] {
            let env = fig1(r);
            let scale = steady_rates(&env).delta_m;
            for i in 0..10_000 {
                let t = i as f64 * 0.02;
                assert!((beta_t(&env, t) - 0.5 * delta_ht(&env, t)).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn beta_fig1_shapes() {
        let env = fig1(1.0);
        rel_close(steady_rates(&env).beta_m, 1.5, 1e-12);
        assert!(min_beta(&env) >= 0.0);
        let env = fig1(0.05);
        let signs: Vec<bool> = (0..=5000).map(|i| beta_t(&env, i as f64 * 0.01) > 0.0).collect();
        let flips = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert!(flips >= 4, "β(t) should alternate sign, saw {flips} changes");
    }

    #[test]
    fn envelope_limits_and_bound() {
        let env = fig1(0.05);
        let s = steady_rates(&env);
        rel_close(envelope(&env, 1e6), s.beta_m, 1e-12);
        let amp = env.alpha_sq() * env.kt * env.r / (1.0 + env.r * env.r).sqrt();
        rel_close(envelope(&env, 0.0), s.beta_m + amp, 1e-12);
        let mut prev = f64::INFINITY;
        for i in 0..10_000 {
            let t = i as f64 * 0.02;
            let (b, g) = (beta_t(&env, t), envelope(&env, t));
            assert!(g <= prev);
            assert!((b - s.beta_m).abs() <= g - s.beta_m + 1e-15);
            prev = g;
        }
    }

    #[test]
    fn settling_time_closed_form() {
        // r = 1, ω₀ = 1: amplitude 3/√2, β_M = 1.5, so 1% settling at ln(100·√2).
        let t = settling_time(&fig1(1.0), 0.01).unwrap();
        rel_close(t, (100.0 * 2f64.sqrt()).ln(), 1e-12);
        assert!(settling_time(&EnvironmentParams::new(0.0, 1.0, 300.0, 1.0).unwrap(), 0.01).is_none());
    }

    #[test]
    fn crossover_bracket_signs() {
        assert!(min_beta(&fig1(0.05)) < 0.0);
        assert!(min_beta(&fig1(1.0)) >= 0.0);
        assert!(matches!(
            markovian_crossover(&fig1(0.1), 0.5, 1.0),
            Err(Error::CrossoverNotBracketed { .. })
        ));
    }
}
