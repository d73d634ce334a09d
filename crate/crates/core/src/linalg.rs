// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-size 2×2 complex matrices and the Pauli basis.
//!
//! Everything in this crate lives in a two-dimensional Hilbert space, so a
//! dense `[[Complex64; 2]; 2]` is both the simplest and the fastest
//! representation. Basis order is `|0⟩ = (1, 0)` (Bloch North pole,
//! `σ_z = +1`) and `|1⟩ = (0, 1)` (South pole).

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2×2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    /// Pauli σ_x.
    pub const SIGMA_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    /// Pauli σ_y.
    pub const SIGMA_Y: Mat2 = Mat2([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]);
    /// Pauli σ_z = diag(1, −1).
    pub const SIGMA_Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);
    /// Lowering operator σ₋ = (σ_x − iσ_y)/2, maps |0⟩ to |1⟩.
    pub const SIGMA_MINUS: Mat2 = Mat2([[ZERO, ZERO], [ONE, ZERO]]);
    /// Raising operator σ₊ = (σ_x + iσ_y)/2.
    pub const SIGMA_PLUS: Mat2 = Mat2([[ZERO, ONE], [ZERO, ZERO]]);

    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Mat2::from_real(a, 0.0, 0.0, d)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    #[inline]
    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Conjugate transpose.
    #[inline]
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    #[inline]
    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    #[inline]
    pub fn scale_re(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// `[A, B] = AB − BA`.
    #[inline]
    pub fn commutator(&self, other: &Mat2) -> Self {
        *self * *other - *other * *self
    }

    /// Squared Frobenius (Hilbert–Schmidt) norm, `tr(A†A)`.
    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_re(0.5)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let h = self.hermitian_part();
        let a = h.0[0][0].re;
        let d = h.0[1][1].re;
        let b = h.0[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - radius, mean + radius]
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let d = *self - *other;
        d.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    #[inline]
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl AddAssign for Mat2 {
    #[inline]
    fn add_assign(&mut self, rhs: Mat2) {
        *self = *self + rhs;
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    #[inline]
    fn sub(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    #[inline]
    fn neg(self) -> Mat2 {
        self.scale_re(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, rhs: f64) -> Mat2 {
        self.scale_re(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (Mat2::SIGMA_X, Mat2::SIGMA_Y, Mat2::SIGMA_Z);
        assert_eq!(x * x, Mat2::IDENTITY);
        assert_eq!(y * y, Mat2::IDENTITY);
        assert_eq!(z * z, Mat2::IDENTITY);
        // [σ_x, σ_y] = 2iσ_z
        assert!(x.commutator(&y).max_abs_diff(&z.scale(Complex64::new(0.0, 2.0))) < 1e-15);
    }

    #[test]
    fn ladder_operators_match_pauli_combinations() {
        let half = Complex64::new(0.5, 0.0);
        let minus = (Mat2::SIGMA_X - Mat2::SIGMA_Y.scale(I)).scale(half);
        let plus = (Mat2::SIGMA_X + Mat2::SIGMA_Y.scale(I)).scale(half);
        assert_eq!(minus, Mat2::SIGMA_MINUS);
        assert_eq!(plus, Mat2::SIGMA_PLUS);
        assert_eq!(Mat2::SIGMA_MINUS.adjoint(), Mat2::SIGMA_PLUS);
    }

    #[test]
    fn hermitian_eigenvalues_of_diagonal() {
        let [lo, hi] = Mat2::diag(0.3, 0.7).hermitian_eigenvalues();
        assert!((lo - 0.3).abs() < 1e-15);
        assert!((hi - 0.7).abs() < 1e-15);
    }
}
