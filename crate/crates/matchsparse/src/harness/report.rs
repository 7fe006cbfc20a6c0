//! Report structures and emission.
//!
//! Reports serialize to JSON with a schema version and struct-declaration
//! key order, so identical runs produce byte-identical documents when the
//! timestamp is suppressed. A CSV of per-trial rows is written next to the
//! JSON for spreadsheet-friendly inspection.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fractional::FractionalReport;
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// One full-pipeline trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    /// Root of the RNG stream family that drove this trial.
    pub seed: u64,
    pub q_size: usize,
    pub q_max_degree: usize,
    /// Exact matched weight of the realized sparsifier, as a rational.
    pub matched_weight: String,
    pub w_f: String,
    pub w_g: String,
    pub w_h: String,
    pub w_x: String,
    pub fractional_pass: bool,
    /// Constraint witnesses, present only when the check failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violations: Option<FractionalReport>,
    /// Exact difference between matcher weight deltas and selected gain
    /// sums; zero on every valid run.
    pub gain_residual: String,
}

/// One point of the approximation-ratio curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub rounds: u64,
    pub ratio: f64,
    pub se: f64,
    pub num_mean: f64,
    pub den_mean: f64,
    pub q_size: usize,
    pub q_max_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceSummary {
    pub lambda_hops: u32,
    pub runs: usize,
    pub pairs: usize,
    pub rejections: usize,
    /// Pairs whose contingency table had an empty marginal; these cannot
    /// reject independence and are excluded from `rejections`.
    pub degenerate_pairs: usize,
    pub rejection_fraction: f64,
    pub significance: f64,
    pub p_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub kind: String,
    pub tool_version: String,
    pub root_seed: u64,
    /// Echo of the full experiment configuration.
    pub config: serde_json::Value,
    /// Unix seconds; omitted under `--no-timestamps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub trials: Vec<TrialRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_curve: Option<Vec<RatioPoint>>,
    /// `degree_histogram[d]` counts vertices of sparsifier degree `d`,
    /// aggregated over trials.
    pub degree_histogram: Vec<u64>,
    pub criteria: Vec<CriterionResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independence: Option<IndependenceSummary>,
    /// True iff every hard criterion in this run passed.
    pub hard_pass: bool,
}

impl Report {
    pub fn new(kind: &str, root_seed: u64, config: serde_json::Value, timestamps: bool) -> Self {
        let timestamp = if timestamps {
            Some(
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            )
        } else {
            None
        };
        Report {
            schema_version: SCHEMA_VERSION,
            kind: kind.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            root_seed,
            config,
            timestamp,
            trials: Vec::new(),
            ratio_curve: None,
            degree_histogram: Vec::new(),
            criteria: Vec::new(),
            independence: None,
            hard_pass: true,
        }
    }

    pub fn push_criterion(&mut self, name: &str, pass: bool, detail: String) {
        if !pass {
            self.hard_pass = false;
        }
        self.criteria.push(CriterionResult {
            name: name.to_string(),
            pass,
            detail,
        });
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Writes the JSON report to `path` and a per-trial CSV next to it.
pub fn emit_report(report: &Report, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json()).map_err(|e| Error::io(path.display().to_string(), e))?;
    let csv_path = path.with_extension("csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(csv_path.display().to_string(), io),
        other => Error::invalid(format!("csv: {other:?}")),
    })?;
    w.write_record([
        "trial",
        "seed",
        "q_size",
        "q_max_degree",
        "matched_weight",
        "w_f",
        "w_g",
        "w_h",
        "w_x",
        "fractional_pass",
        "gain_residual",
    ])
    .map_err(|e| Error::invalid(format!("csv: {e}")))?;
    for t in &report.trials {
        w.write_record([
            t.trial.to_string(),
            t.seed.to_string(),
            t.q_size.to_string(),
            t.q_max_degree.to_string(),
            t.matched_weight.clone(),
            t.w_f.clone(),
            t.w_g.clone(),
            t.w_h.clone(),
            t.w_x.clone(),
            t.fractional_pass.to_string(),
            t.gain_residual.clone(),
        ])
        .map_err(|e| Error::invalid(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::io(csv_path.display().to_string(), e))?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| Error::invalid(format!("report parse: {e}")))
}
