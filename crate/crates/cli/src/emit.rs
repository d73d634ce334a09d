// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON writers.
//!
//! Floats are written in their shortest round-trip decimal form, so parsing
//! an emitted file gives back the in-memory values bit for bit.

use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tclq_core::scenario::{CaseOutput, CoefficientCurve, ScenarioRun};
use tclq_core::{ParamsSnapshot, Report, Trajectory};

use crate::config::Format;

pub const TRAJECTORY_HEADER: [&str; 11] =
    ["t", "x", "y", "z", "purity", "coherence", "beta", "V", "f1", "f2", "branch"];

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> EmitError + '_ {
    move |source| EmitError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Shortest decimal that parses back to exactly `x`.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

/// One trajectory sample as it appears in CSV and JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub purity: f64,
    pub coherence: f64,
    pub beta: f64,
    #[serde(rename = "V")]
    pub v: Option<f64>,
    pub f1: f64,
    pub f2: f64,
    pub branch: String,
}

pub fn trajectory_rows(traj: &Trajectory) -> Vec<TrajectoryRow> {
    traj.points
        .iter()
        .map(|p| TrajectoryRow {
            t: p.t,
            x: p.bloch.x,
            y: p.bloch.y,
            z: p.bloch.z,
            purity: p.purity,
            coherence: p.coherence,
            beta: p.beta,
            v: p.v,
            f1: p.f1,
            f2: p.f2,
            branch: p.branch.to_string(),
        })
        .collect()
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<(), EmitError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for p in &traj.points {
        let v = p.v.map(float).unwrap_or_default();
        w.write_record([
            float(p.t),
            float(p.bloch.x),
            float(p.bloch.y),
            float(p.bloch.z),
            float(p.purity),
            float(p.coherence),
            float(p.beta),
            v,
            float(p.f1),
            float(p.f2),
            p.branch.to_string(),
        ])?;
    }
    w.flush().map_err(|e| EmitError::Csv(e.into()))?;
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Vec<TrajectoryRow>, EmitError> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<Result<Vec<TrajectoryRow>, _>>()?;
    Ok(rows)
}

#[derive(Debug, Serialize)]
struct TrajectoryDocument<'a> {
    params: &'a ParamsSnapshot,
    samples: Vec<TrajectoryRow>,
}

pub fn write_trajectory_json<W: Write>(traj: &Trajectory, out: W) -> Result<(), EmitError> {
    let doc = TrajectoryDocument {
        params: &traj.params,
        samples: trajectory_rows(traj),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

/// Coefficient curve as `t,beta,envelope`, plus `gamma,delta` when requested.
pub fn write_coefficients_csv<W: Write>(curve: &CoefficientCurve, with_rates: bool, out: W) -> Result<(), EmitError> {
    let mut w = csv::Writer::from_writer(out);
    if with_rates {
        w.write_record(["t", "beta", "envelope", "gamma", "delta"])?;
    } else {
        w.write_record(["t", "beta", "envelope"])?;
    }
    for s in &curve.samples {
        let mut row = vec![float(s.t), float(s.beta), float(s.envelope)];
        if with_rates {
            row.push(float(s.gamma));
            row.push(float(s.delta));
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| EmitError::Csv(e.into()))?;
    Ok(())
}

pub fn write_coefficients_json<W: Write>(curve: &CoefficientCurve, out: W) -> Result<(), EmitError> {
    serde_json::to_writer_pretty(out, curve)?;
    Ok(())
}

/// File stem for one case: scenario name and label with anything outside
/// `[A-Za-z0-9._-]` replaced by `_`.
pub fn case_stem(scenario: &str, label: &str) -> String {
    format!("{}__{}", sanitize(scenario), sanitize(label))
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') { c } else { '_' })
        .collect()
}

fn create(path: &Path) -> Result<BufWriter<File>, EmitError> {
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

fn write_case(dir: &Path, scenario: &str, output: &CaseOutput, formats: &[Format]) -> Result<Vec<String>, EmitError> {
    let stem = case_stem(scenario, &output.label);
    let mut written = Vec::new();
    for format in formats {
        let name = match format {
            Format::Csv => format!("{stem}.csv"),
            Format::Json => format!("{stem}.json"),
        };
        let path = dir.join(&name);
        let mut out = create(&path)?;
        match (format, &output.trajectory, &output.curve) {
            (Format::Csv, Some(t), _) => write_trajectory_csv(t, &mut out)?,
            (Format::Json, Some(t), _) => write_trajectory_json(t, &mut out)?,
            (Format::Csv, None, Some(c)) => write_coefficients_csv(c, true, &mut out)?,
            (Format::Json, None, Some(c)) => write_coefficients_json(c, &mut out)?,
            (_, None, None) => continue,
        }
        out.flush().map_err(io_err(&path))?;
        written.push(name);
    }
    Ok(written)
}

/// Writes every case's series plus `<scenario>__report.json` into `dir`
/// and returns the report with its series references filled in.
pub fn emit_scenario(run: &ScenarioRun, dir: &Path, formats: &[Format]) -> Result<Report, EmitError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut report = run.report.clone();
    for (case, output) in report.cases.iter_mut().zip(&run.outputs) {
        case.series = write_case(dir, &report.scenario, output, formats)?;
    }
    let path = dir.join(format!("{}__report.json", sanitize(&report.scenario)));
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    out.write_all(b"\n").map_err(io_err(&path))?;
    out.flush().map_err(io_err(&path))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tclq_core::scenario::states;
    use tclq_core::{integrate_free, EnvironmentParams};

    fn short_free() -> Trajectory {
        integrate_free(&EnvironmentParams::transfer_default(), &states::rho_s01(), 0.5, 0.1).unwrap()
    }

    #[test]
    fn float_text_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0, -0.0, 123456789.123] {
            let back: f64 = float(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn free_run_first_row() {
        let mut buf = Vec::new();
        write_trajectory_csv(&short_free(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x,y,z,purity,coherence,beta,V,f1,f2,branch");
        let row0: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row0[..6], ["0.0", "0.0", "0.0", "-1.0", "1.0", "0.0"]);
        // β(0) vanishes up to roundoff in the phase form.
        assert!(row0[6].parse::<f64>().unwrap().abs() <= 1e-14 * 0.01 * 300.0);
        assert_eq!(row0[7..], ["", "0.0", "0.0", "free"]);
        for line in text.lines() {
            assert_eq!(line.split(',').count(), 11);
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let traj = short_free();
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).unwrap();
        assert_eq!(read_trajectory_csv(&buf[..]).unwrap(), trajectory_rows(&traj));
    }

    #[test]
    fn case_stems_are_filesystem_safe() {
        assert_eq!(case_stem("r_sensitivity", "r=0.01"), "r_sensitivity__r_0.01");
        assert_eq!(case_stem("xfer_fwd", "g1=10,g2=30"), "xfer_fwd__g1_10_g2_30");
    }
}
