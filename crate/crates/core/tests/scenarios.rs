// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use tclq_core::environment::rates;
use tclq_core::scenario::{run_case, states, CaseKind};
use tclq_core::*;

#[test]
fn registry_has_every_named_scenario() {
    let all = builtin_scenarios();
    assert!(all.len() >= 11);
    let eigen = find_scenario("free_eigen").unwrap();
    let CaseKind::Free { initial, .. } = &eigen.cases[0].kind else { panic!() };
    assert_eq!(initial.matrix().0, QubitState::south_pole().matrix().0);

    let fwd = find_scenario("xfer_fwd").unwrap();
    let CaseKind::Controlled { target, .. } = &fwd.cases[0].kind else { panic!() };
    let s = 15f64.sqrt();
    let expected = [[3.0 / 8.0, -s / 8.0], [-s / 8.0, 5.0 / 8.0]];
    for (row, want) in target.matrix().0.iter().zip(expected) {
        for (z, w) in row.iter().zip(want) {
            assert!((z - Complex64::new(w, 0.0)).norm() < 1e-15);
        }
    }
}

#[test]
fn under_gain_minimum_near_reported_value() {
    let run = run_scenario(&find_scenario("xfer_under").unwrap()).unwrap();
    let v = run.report.cases[0].metrics.v_min.unwrap();
    assert!((v - 1.2e-3).abs() <= 5e-4, "V_min = {v}");
}

#[test]
fn metrics_are_recomputable_from_series() {
    let run = run_scenario(&find_scenario("xfer_rev").unwrap()).unwrap();
    let m = &run.report.cases[0].metrics;
    let traj = run.outputs[0].trajectory.as_ref().unwrap();
    let (v, t) = traj
        .points
        .iter()
        .map(|p| (p.v.unwrap(), p.t))
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    assert_eq!(m.v_min, Some(v));
    assert_eq!(m.t_at_v_min, Some(t));
    assert_eq!(m.terminal_bloch, Some(traj.last().unwrap().bloch));
    assert_eq!(m.samples, traj.len());
}

#[test]
fn doubled_step_still_reaches_equilibrium() {
    let mut case = find_scenario("free_eigen").unwrap().cases.remove(0);
    if let CaseKind::Free { dt, .. } = &mut case.kind {
        *dt = 0.2;
    }
    let (report, _) = run_case(&case).unwrap();
    let end = report.metrics.terminal_bloch.unwrap();
    assert!(end.distance(&BlochVector::new(0.0, 0.0, -1.0 / 60.0)) < 1e-3, "{end}");
}

/// RK4 with the dissipation coefficient's sign flipped.
fn flipped_gamma_run(rho0: QubitState, env: &EnvironmentParams, t_f: f64, dt: f64) -> BlochVector {
    let h0 = HamiltonianModel::new(env.omega0).h0();
    let i = Complex64::new(0.0, 1.0);
    let f = |m: Mat2, t: f64| {
        let k = rates(env, t);
        let rho = QubitState::from_matrix_unchecked(m);
        h0.commutator(&m).scale(-i) + dissipator(&rho, k.delta, -k.gamma)
    };
    let mut m = *rho0.matrix();
    let steps = (t_f / dt).round() as usize;
    for n in 0..steps {
        let t = n as f64 * dt;
        let k1 = f(m, t);
        let k2 = f(m + k1 * (dt / 2.0), t + dt / 2.0);
        let k3 = f(m + k2 * (dt / 2.0), t + dt / 2.0);
        let k4 = f(m + k3 * dt, t + dt);
        m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    to_bloch(&QubitState::from_matrix_unchecked(m))
}

#[test]
fn flipping_gamma_breaks_equilibrium() {
    let env = EnvironmentParams::transfer_default();
    let end = flipped_gamma_run(states::rho_s01(), &env, 600.0, 0.1);
    let eq = BlochVector::new(0.0, 0.0, -1.0 / 60.0);
    assert!((end.z - 1.0 / 60.0).abs() < 1e-3, "{end}");
    assert!(end.distance(&eq) > 1e-3);
}
