// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Qubit state algebra: density matrices, Bloch vectors and the scalar
//! figures of merit derived from them (purity, coherence, trace distance).
//!
//! Validation happens when a [`QubitState`] is constructed from raw matrix
//! entries. Integrators build states through [`QubitState::from_matrix_unchecked`]
//! and monitor physicality separately.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat2;

/// Absolute tolerance on `‖m − m†‖_F`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Absolute tolerance on `|tr(m) − 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue still accepted as physical (integration drift allowance).
pub const POSITIVITY_TOL: f64 = -1e-6;
/// Allowed excess of the Bloch norm over 1.
pub const BLOCH_NORM_TOL: f64 = 1e-6;

/// Real Bloch vector `(x, y, z) = (tr ρσ_x, tr ρσ_y, tr ρσ_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector::new(0.0, 0.0, 0.0);
    pub const NORTH: BlochVector = BlochVector::new(0.0, 0.0, 1.0);
    pub const SOUTH: BlochVector = BlochVector::new(0.0, 0.0, -1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_physical(&self) -> bool {
        self.norm() <= 1.0 + BLOCH_NORM_TOL
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = BlochVector;
    fn mul(self, s: f64) -> BlochVector {
        BlochVector::new(self.x * s, self.y * s, self.z * s)
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from([x, y, z]: [f64; 3]) -> Self {
        BlochVector::new(x, y, z)
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A 2×2 Hermitian, unit-trace density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitState(Mat2);

impl QubitState {
    /// Validates Hermiticity and unit trace.
    pub fn new(m: Mat2) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect.is_nan() || defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let tr = m.trace();
        let trace_defect = (tr - Complex64::new(1.0, 0.0)).norm();
        if trace_defect.is_nan() || trace_defect > TRACE_TOL {
            return Err(Error::TraceNotUnit { trace: tr.re });
        }
        Ok(QubitState(m))
    }

    /// Like [`QubitState::new`], additionally rejecting states whose minimum
    /// eigenvalue is below [`POSITIVITY_TOL`].
    pub fn new_strict(m: Mat2) -> Result<Self> {
        let state = Self::new(m)?;
        state.check_physical()?;
        Ok(state)
    }

    /// Wraps a matrix without validation. Used inside integration loops.
    #[inline]
    pub fn from_matrix_unchecked(m: Mat2) -> Self {
        QubitState(m)
    }

    /// Real-entry convenience constructor, `[[a, b], [b, d]]`.
    pub fn from_real_symmetric(a: f64, b: f64, d: f64) -> Result<Self> {
        Self::new(Mat2::from_real(a, b, b, d))
    }

    /// `|0⟩⟨0|`, the North pole.
    pub fn ground_up() -> Self {
        QubitState(Mat2::diag(1.0, 0.0))
    }

    /// `|1⟩⟨1| = diag(0, 1)`, the South pole.
    pub fn south_pole() -> Self {
        QubitState(Mat2::diag(0.0, 1.0))
    }

    pub fn maximally_mixed() -> Self {
        QubitState(Mat2::diag(0.5, 0.5))
    }

    #[inline]
    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    #[inline]
    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.hermitian_eigenvalues()[0]
    }

    pub fn check_physical(&self) -> Result<()> {
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue < POSITIVITY_TOL {
            Err(Error::NonPhysical { min_eigenvalue })
        } else {
            Ok(())
        }
    }

    pub fn to_bloch(&self) -> BlochVector {
        to_bloch(self)
    }

    pub fn max_abs_diff(&self, other: &QubitState) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

/// `(tr ρσ_x, tr ρσ_y, tr ρσ_z)`.
pub fn to_bloch(rho: &QubitState) -> BlochVector {
    let m = rho.matrix();
    BlochVector::new(
        (*m * Mat2::SIGMA_X).trace().re,
        (*m * Mat2::SIGMA_Y).trace().re,
        (*m * Mat2::SIGMA_Z).trace().re,
    )
}

/// `ρ = (1 + r·σ)/2`. Accepts any norm; see [`from_bloch_strict`].
pub fn from_bloch(v: BlochVector) -> QubitState {
    QubitState(Mat2::new(
        Complex64::new(0.5 * (1.0 + v.z), 0.0),
        Complex64::new(0.5 * v.x, -0.5 * v.y),
        Complex64::new(0.5 * v.x, 0.5 * v.y),
        Complex64::new(0.5 * (1.0 - v.z), 0.0),
    ))
}

/// [`from_bloch`] that rejects vectors outside the Bloch ball.
pub fn from_bloch_strict(v: BlochVector) -> Result<QubitState> {
    if !v.is_physical() {
        return Err(Error::BlochNormExceeded { norm: v.norm() });
    }
    Ok(from_bloch(v))
}

/// `tr(ρ²)`.
pub fn purity(rho: &QubitState) -> f64 {
    let m = rho.matrix();
    (*m * *m).trace().re
}

/// Coherence factor `√(x² + y²) = 2|ρ₀₁|`.
pub fn coherence(rho: &QubitState) -> f64 {
    2.0 * rho.matrix().get(0, 1).norm()
}

/// Half the Euclidean distance between Bloch vectors.
pub fn trace_distance(a: &QubitState, b: &QubitState) -> f64 {
    0.5 * to_bloch(a).distance(&to_bloch(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho_s11() -> QubitState {
        let s = 15f64.sqrt();
        QubitState::from_real_symmetric(15.0 / 16.0, s / 16.0, 1.0 / 16.0).unwrap()
    }

    fn rho_s12() -> QubitState {
        let s = 15f64.sqrt();
        QubitState::from_real_symmetric(3.0 / 8.0, -s / 8.0, 5.0 / 8.0).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn south_pole_bloch() {
        let v = to_bloch(&QubitState::south_pole());
        assert_eq!(v, BlochVector::new(0.0, 0.0, -1.0));
        assert_eq!(to_bloch(&QubitState::maximally_mixed()), BlochVector::ORIGIN);
    }

    #[test]
    fn superposition_bloch() {
        let v = to_bloch(&rho_s11());
        assert_close(v.x, 15f64.sqrt() / 8.0, 1e-15);
        assert_close(v.y, 0.0, 1e-15);
        assert_close(v.z, 7.0 / 8.0, 1e-15);
    }

    #[test]
    fn from_bloch_examples() {
        assert_eq!(from_bloch(BlochVector::ORIGIN), QubitState::maximally_mixed());
        assert_eq!(from_bloch(BlochVector::SOUTH), QubitState::south_pole());
        let v = BlochVector::new(-15f64.sqrt() / 4.0, 0.0, -0.25);
        assert!(from_bloch(v).max_abs_diff(&rho_s12()) < 1e-15);
    }

    #[test]
    fn strict_from_bloch_rejects_outside_ball() {
        assert!(from_bloch_strict(BlochVector::new(0.0, 0.0, 1.0 + 1e-7)).is_ok());
        assert!(matches!(
            from_bloch_strict(BlochVector::new(0.6, 0.0, 0.9)),
            Err(Error::BlochNormExceeded { .. })
        ));
    }

    #[test]
    fn rejects_bad_matrices() {
        let non_herm = Mat2::from_real(0.5, 0.1, 0.2, 0.5);
        assert!(matches!(QubitState::new(non_herm), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            QubitState::new(Mat2::diag(0.5, 0.6)),
            Err(Error::TraceNotUnit { .. })
        ));
        // Hermitian, unit trace, but eigenvalues (1.5, −0.5).
        let neg = Mat2::diag(1.5, -0.5);
        assert!(QubitState::new(neg).is_ok());
        assert!(matches!(QubitState::new_strict(neg), Err(Error::NonPhysical { .. })));
    }

    #[test]
    fn purity_examples() {
        assert_close(purity(&rho_s11()), 1.0, 1e-15);
        assert_close(purity(&QubitState::maximally_mixed()), 0.5, 1e-15);
        let eq = from_bloch(BlochVector::new(0.0, 0.0, -1.0 / 60.0));
        assert_close(purity(&eq), 0.5001388888888889, 1e-15);
    }

    #[test]
    fn coherence_examples() {
        assert_eq!(coherence(&QubitState::from_real_symmetric(0.3, 0.0, 0.7).unwrap()), 0.0);
        assert_close(coherence(&rho_s11()), 15f64.sqrt() / 8.0, 1e-15);
        let rho0 = QubitState::from_real_symmetric(1.0 / 3.0, 2f64.sqrt() / 3.0, 2.0 / 3.0).unwrap();
        assert_close(coherence(&rho0), 2.0 * 2f64.sqrt() / 3.0, 1e-15);
    }

    #[test]
    fn trace_distance_examples() {
        let a = rho_s11();
        assert_eq!(trace_distance(&a, &a), 0.0);
        assert_close(
            trace_distance(&QubitState::ground_up(), &QubitState::south_pole()),
            1.0,
            1e-15,
        );
        // Bloch difference (3√15/8, 0, 9/8): squared norm 216/64.
        assert_close(trace_distance(&a, &rho_s12()), 0.5 * (216.0f64 / 64.0).sqrt(), 1e-15);
    }
}
