// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: ‖m − m†‖_F = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("matrix trace is {trace} (expected 1)")]
    TraceNotUnit { trace: f64 },

    #[error("state is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NonPhysical { min_eigenvalue: f64 },

    #[error("Bloch vector norm {norm} exceeds 1")]
    BlochNormExceeded { norm: f64 },

    #[error("{name} {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("alpha² = {alpha_sq} exceeds weak-coupling bound {bound}")]
    CouplingTooStrong { alpha_sq: f64, bound: f64 },

    #[error("crossover search not bracketed: min β at r = {r_lo} is {m_lo:e}, at r = {r_hi} is {m_hi:e}")]
    CrossoverNotBracketed { r_lo: f64, r_hi: f64, m_lo: f64, m_hi: f64 },

    #[error("drift term has imaginary residue {imag:e}")]
    ComplexDrift { imag: f64 },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid scenario `{name}`: {reason}")]
    InvalidScenario { name: String, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
