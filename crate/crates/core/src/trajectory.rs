// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bloch::{coherence, purity, to_bloch, BlochVector, QubitState};
use crate::control::ControlParams;
use crate::environment::EnvironmentParams;

/// Which control law produced the fields held over a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `|T₁| > θ`: f₁ cancels the drift.
    A,
    /// `|T₁| ≤ θ < |T₂|`: f₂ cancels the drift.
    B,
    /// Both T-functions at or below θ: fields off.
    C,
    /// Uncontrolled evolution.
    #[serde(rename = "free")]
    Free,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::A => "A",
            Branch::B => "B",
            Branch::C => "C",
            Branch::Free => "free",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(Branch::A),
            "B" => Ok(Branch::B),
            "C" => Ok(Branch::C),
            "free" => Ok(Branch::Free),
            other => Err(format!("unknown branch tag `{other}`")),
        }
    }
}

/// One recorded sample. `f1`/`f2` are the fields held over the following step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: QubitState,
    pub bloch: BlochVector,
    pub purity: f64,
    pub coherence: f64,
    pub beta: f64,
    pub f1: f64,
    pub f2: f64,
    /// Lyapunov function; `None` when no target is set.
    pub v: Option<f64>,
    pub branch: Branch,
}

impl TrajectoryPoint {
    pub fn new(
        t: f64,
        state: QubitState,
        beta: f64,
        fields: (f64, f64),
        v: Option<f64>,
        branch: Branch,
    ) -> Self {
        TrajectoryPoint {
            t,
            state,
            bloch: to_bloch(&state),
            purity: purity(&state),
            coherence: coherence(&state),
            beta,
            f1: fields.0,
            f2: fields.1,
            v,
            branch,
        }
    }
}

/// Parameters a trajectory was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsSnapshot {
    pub env: EnvironmentParams,
    pub dt: f64,
    pub t_f: f64,
    pub initial: BlochVector,
    pub target: Option<BlochVector>,
    pub control: Option<ControlParams>,
}

/// Integration health accumulated over a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    pub min_eigenvalue: f64,
    /// Largest `|tr ρ − 1|` seen before per-step renormalization.
    pub max_trace_defect: f64,
    /// Largest `‖ρ − ρ†‖_F` seen before per-step re-Hermitization.
    pub max_hermiticity_defect: f64,
    /// First sample time with minimum eigenvalue below the positivity tolerance.
    pub first_nonphysical_t: Option<f64>,
}

impl Default for RunDiagnostics {
    fn default() -> Self {
        RunDiagnostics {
            min_eigenvalue: f64::INFINITY,
            max_trace_defect: 0.0,
            max_hermiticity_defect: 0.0,
            first_nonphysical_t: None,
        }
    }
}

impl RunDiagnostics {
    pub fn is_physical(&self) -> bool {
        self.first_nonphysical_t.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: ParamsSnapshot,
    pub points: Vec<TrajectoryPoint>,
    pub diagnostics: RunDiagnostics,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }

    /// Polyline length of the Bloch-space path.
    pub fn path_length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[0].bloch.distance(&w[1].bloch))
            .sum()
    }
}
