// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

use tclq_core::run_criterion;

fn check(id: u8) {
    let result = run_criterion(id);
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_01_coefficient_identity() {
    check(1);
}

#[test]
fn criterion_02_zero_time_rates() {
    check(2);
}

#[test]
fn criterion_03_markovian_crossover() {
    check(3);
}

#[test]
fn criterion_04_equilibrium() {
    check(4);
}

#[test]
fn criterion_05_purity_beta_anticorrelation() {
    check(5);
}

#[test]
fn criterion_06_closed_system_limit() {
    check(6);
}

#[test]
fn criterion_07_forward_transfer() {
    check(7);
}

#[test]
fn criterion_08_reverse_transfer() {
    check(8);
}

#[test]
fn criterion_09_gain_sensitivity() {
    check(9);
}

#[test]
fn criterion_10_branch_algebra() {
    check(10);
}

#[test]
fn criterion_11_integrator_order() {
    check(11);
}

#[test]
fn criterion_12_r_sensitivity_ordering() {
    check(12);
}
