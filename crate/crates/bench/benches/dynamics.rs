// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tclq_core::scenario::states;
use tclq_core::{
    beta_t, control_step, integrate_controlled, integrate_free, rhs, step_rk4, ControlParams, EnvironmentParams,
};

fn coefficients(c: &mut Criterion) {
    let env = EnvironmentParams::transfer_default();
    c.bench_function("beta_t", |b| b.iter(|| beta_t(&env, black_box(0.731))));
}

fn right_hand_side(c: &mut Criterion) {
    let env = EnvironmentParams::transfer_default();
    let rho = states::rho_s11();
    c.bench_function("rhs", |b| b.iter(|| rhs(black_box(&rho), 0.5, 1.2, -0.7, &env)));
    c.bench_function("step_rk4", |b| {
        b.iter(|| step_rk4(black_box(&rho), 0.5, 5e-4, 1.2, -0.7, &env))
    });
}

fn control(c: &mut Criterion) {
    let env = EnvironmentParams::transfer_default();
    let params = ControlParams::new(10.0, 30.0, 1.0).unwrap();
    let (from, to) = (states::rho_s11(), states::rho_s12());
    c.bench_function("control_step", |b| {
        b.iter(|| control_step(black_box(&from), &to, &params, &env, 0.3))
    });
    let mut group = c.benchmark_group("runs");
    group.sample_size(10);
    group.bench_function("xfer_fwd_1au", |b| {
        let mut p = params;
        p.stop_on_target = false;
        b.iter(|| integrate_controlled(&env, &from, &to, &p).unwrap())
    });
    group.bench_function("free_eigen_600au", |b| {
        b.iter(|| integrate_free(&env, &states::rho_s01(), 600.0, 0.1).unwrap())
    });
    group.finish();
}

criterion_group!(benches, coefficients, right_hand_side, control);
criterion_main!(benches);
