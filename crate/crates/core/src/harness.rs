//! Scenario execution: run estimator variants over a synthesized signal,
//! collect per-step tracking metrics, and summarize behavior around
//! parameter change events.
//!
//! Runs are deterministic: a scenario (including its seed) always produces
//! the same record sequence, and records are ordered by (label, step)
//! regardless of how the per-estimator runs were executed.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::estimators::{init_state, step, ConfigError, EstimatorConfig};
use crate::harmonic::{synthesize_signal, FrequencyGrid, ParameterTrajectory};
use crate::numerics::l2_distance;
use crate::oracle::orthogonality_report;
use crate::window::{SampleWindow, WindowError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("steps: must exceed the largest window size plus one (steps={steps}, max w={max_w})")]
    TooFewSteps { steps: u64, max_w: usize },
    #[error("estimators: at least one estimator is required")]
    NoEstimators,
    #[error("estimators: duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("estimators: label `{0}` must be nonempty and free of commas and line breaks")]
    BadLabel(String),
    #[error("noise_std: must be finite and >= 0, got {0}")]
    NoiseStd(f64),
    #[error("segments: parameter length {got} does not match the grid dimension {expected}")]
    TrajectoryDimension { expected: usize, got: usize },
    #[error("estimator `{label}`: {source}")]
    Config { label: String, source: ConfigError },
    #[error(transparent)]
    Window(#[from] WindowError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("unknown estimator label `{0}`")]
    UnknownLabel(String),
}

/// A complete experiment definition: the signal plus the estimators that run
/// over it.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub grid: FrequencyGrid,
    pub trajectory: ParameterTrajectory,
    pub steps: u64,
    pub noise_std: f64,
    pub seed: u64,
    pub estimators: Vec<(String, EstimatorConfig)>,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.estimators.is_empty() {
            return Err(ScenarioError::NoEstimators);
        }
        let max_w = self
            .estimators
            .iter()
            .map(|(_, c)| c.w)
            .max()
            .expect("nonempty");
        if self.steps <= max_w as u64 + 1 {
            return Err(ScenarioError::TooFewSteps {
                steps: self.steps,
                max_w,
            });
        }
        if !(self.noise_std >= 0.0) || !self.noise_std.is_finite() {
            return Err(ScenarioError::NoiseStd(self.noise_std));
        }
        if self.trajectory.param_dim() != self.grid.param_dim() {
            return Err(ScenarioError::TrajectoryDimension {
                expected: self.grid.param_dim(),
                got: self.trajectory.param_dim(),
            });
        }
        let mut seen = BTreeSet::new();
        for (label, config) in &self.estimators {
            if label.is_empty() || label.contains(',') || label.contains('\n') || label.contains('\r')
            {
                return Err(ScenarioError::BadLabel(label.clone()));
            }
            if !seen.insert(label.clone()) {
                return Err(ScenarioError::DuplicateLabel(label.clone()));
            }
            config
                .validate(self.grid.param_dim())
                .map_err(|source| ScenarioError::Config {
                    label: label.clone(),
                    source,
                })?;
        }
        Ok(())
    }
}

/// Per-step, per-estimator tracking metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub step: u64,
    pub label: String,
    /// Parameters after this step.
    pub theta: Vec<f64>,
    /// ||theta - theta*(k)||_2.
    pub param_error: f64,
    /// |phi' theta - y| after the step.
    pub output_residual: f64,
    /// Worst endpoint-interpolation residual; present only on steps where
    /// the rank-two law ran.
    pub extended_residual: Option<f64>,
    /// True when a singularity guard fired during this step.
    pub skipped: bool,
}

/// Run every configured estimator over the synthesized signal.
///
/// Produces one record per (step, estimator), ordered by (label, step).
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<MetricsRecord>, ScenarioError> {
    scenario.validate()?;
    let samples = synthesize_signal(
        &scenario.grid,
        &scenario.trajectory,
        scenario.steps,
        scenario.noise_std,
        scenario.seed,
    );
    let mut records = Vec::with_capacity(samples.len() * scenario.estimators.len());
    for (label, config) in &scenario.estimators {
        let mut state = init_state(&scenario.grid, config);
        let mut window = SampleWindow::new(config.w);
        for sample in &samples {
            let outcome = step(config, &state, &mut window, sample)?;
            state = outcome.state;
            let extended_residual = outcome
                .pair
                .as_ref()
                .map(|pair| orthogonality_report(pair, &state.theta).max_residual());
            records.push(MetricsRecord {
                step: sample.k,
                label: label.clone(),
                param_error: l2_distance(&state.theta, scenario.trajectory.theta_at(sample.k)),
                output_residual: (sample.phi.dot(&state.theta) - sample.y).abs(),
                extended_residual,
                skipped: outcome.skipped,
                theta: state.theta.clone(),
            });
        }
    }
    records.sort_by(|a, b| (a.label.as_str(), a.step).cmp(&(b.label.as_str(), b.step)));
    Ok(records)
}

/// Steps needed after `change_step` until the parameter error stays at or
/// below `tol` for the rest of the run; `None` when it never settles.
pub fn reconvergence_time(
    records: &[MetricsRecord],
    label: &str,
    change_step: u64,
    tol: f64,
) -> Result<Option<u64>, HarnessError> {
    assert!(tol > 0.0, "tol must be positive");
    let mut seen = false;
    let mut last_step = 0u64;
    let mut last_bad: Option<u64> = None;
    for record in records.iter().filter(|r| r.label == label) {
        seen = true;
        last_step = last_step.max(record.step);
        if record.step >= change_step && record.param_error > tol {
            last_bad = Some(last_bad.map_or(record.step, |b| b.max(record.step)));
        }
    }
    if !seen {
        return Err(HarnessError::UnknownLabel(label.to_owned()));
    }
    Ok(match last_bad {
        None => Some(0),
        Some(bad) if bad >= last_step => None,
        Some(bad) => Some(bad - change_step + 1),
    })
}

/// Aggregated per-label view of one tracking run.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSummary {
    pub label: String,
    pub reconvergence: Option<u64>,
    /// Parameter error at the last step.
    pub final_error: f64,
    /// Mean extended residual over rank-two steps; absent for variants that
    /// never ran the rank-two law.
    pub mean_extended_residual: Option<f64>,
    /// Records flagged as skipped.
    pub skip_count: u64,
}

/// Summarize every label present in the records, sorted by label.
pub fn compare_summary(
    records: &[MetricsRecord],
    change_step: u64,
    tol: f64,
) -> Vec<LabelSummary> {
    let mut by_label: BTreeMap<&str, Vec<&MetricsRecord>> = BTreeMap::new();
    for record in records {
        by_label.entry(&record.label).or_default().push(record);
    }
    by_label
        .into_iter()
        .map(|(label, rows)| {
            let reconvergence = reconvergence_time(records, label, change_step, tol)
                .expect("label taken from records");
            let final_error = rows
                .iter()
                .max_by_key(|r| r.step)
                .expect("nonempty group")
                .param_error;
            let extended: Vec<f64> = rows.iter().filter_map(|r| r.extended_residual).collect();
            let mean_extended_residual = if extended.is_empty() {
                None
            } else {
                Some(extended.iter().sum::<f64>() / extended.len() as f64)
            };
            let skip_count = rows.iter().filter(|r| r.skipped).count() as u64;
            LabelSummary {
                label: label.to_owned(),
                reconvergence,
                final_error,
                mean_extended_residual,
                skip_count,
            }
        })
        .collect()
}
