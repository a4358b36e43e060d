//! CSV tables and the summary JSON written by an experiment run.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::trace::Trace;
use crate::Vector;

/// Fixed-schema run summary. Every key is always present; quantities that do
/// not apply to the run's mode are `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub mode: String,
    pub seed: u64,
    pub rounds: Option<usize>,
    pub players: Option<usize>,
    pub comparators: usize,
    pub max_regret: Option<f64>,
    pub max_regret_comparator: Option<String>,
    pub bound_at_max: Option<f64>,
    pub min_slack: Option<f64>,
    pub bound_violations: usize,
    pub bounds_hold: bool,
    pub external_regret: Option<f64>,
    pub gradient_equilibrium_norm: Option<f64>,
    pub epsilon: Option<f64>,
    pub social_regret: Option<f64>,
    pub social_bound: Option<f64>,
    pub fuzz_suite: Option<String>,
    pub fuzz_samples: Option<usize>,
    pub fuzz_min_gap: Option<f64>,
}

impl Summary {
    pub fn new(mode: impl Into<String>, seed: u64) -> Self {
        Self {
            mode: mode.into(),
            seed,
            rounds: None,
            players: None,
            comparators: 0,
            max_regret: None,
            max_regret_comparator: None,
            bound_at_max: None,
            min_slack: None,
            bound_violations: 0,
            bounds_hold: true,
            external_regret: None,
            gradient_equilibrium_norm: None,
            epsilon: None,
            social_regret: None,
            social_bound: None,
            fuzz_suite: None,
            fuzz_samples: None,
            fuzz_min_gap: None,
        }
    }
}

/// One line of `regret.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretRow {
    pub comparator_id: String,
    pub regret: f64,
    #[serde(rename = "D_obs")]
    pub d_obs: f64,
    #[serde(rename = "Bf_obs")]
    pub bf_obs: f64,
    pub bound: Option<f64>,
    pub slack: Option<f64>,
    /// `Σ_t ℓ^t(x^t) - ℓ^t(p^t)` when the adversary has explicit losses.
    pub loss_regret: Option<f64>,
}

/// One line of `fuzz.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzRow {
    pub sample: usize,
    pub dim: usize,
    pub set: String,
    pub comparator: String,
    pub gap: f64,
}

#[derive(Serialize)]
struct TraceRow {
    t: usize,
    x: String,
    g: String,
    eta: f64,
}

fn joined(v: &Vector) -> String {
    v.iter()
        .map(|x| format!("{x:e}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

/// `t,x,g,eta` with vector entries joined by `;`.
pub fn write_trace(path: &Path, trace: &Trace) -> std::io::Result<()> {
    let rows: Vec<TraceRow> = trace
        .rounds()
        .iter()
        .map(|r| TraceRow {
            t: r.t,
            x: joined(&r.x),
            g: joined(&r.g),
            eta: r.eta,
        })
        .collect();
    write_rows(path, &rows)
}

pub fn write_summary(path: &Path, summary: &Summary) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    fs::write(path, text)
}
