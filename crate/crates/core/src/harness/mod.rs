//! Experiment orchestration: configuration, digit caches, the three
//! experiments, and report emission.
//!
//! * **A** trains one network on a binarized constant and scores it on two
//!   large held-out window sets, with a subgroup confidence limit.
//! * **B** trains many freshly initialised networks per MT19937 sequence and
//!   explains each seed's success count through the pattern census.
//! * **C** runs the ideal-predictor normality test over a grid of prefix
//!   lengths.

use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;

mod cache;
mod config;
mod controls;
mod experiment_a;
mod experiment_b;
mod experiment_c;
mod report;

pub use cache::{cache_path, ensure_cached_digits, load_cached_digits};
pub use controls::{alternating_sequence, conditional_bias_sequence};
pub use config::{ExperimentConfig, ExperimentId, WindowRange};
pub use experiment_a::{
    run_experiment_a, run_experiment_a_on, DatasetResult, ExperimentAResult, IdealBound, SubgroupResult, TrainSummary,
};
pub use experiment_b::{
    run_experiment_b, run_experiment_b_on, trial_init_seed, ExperimentBResult, SeedResult, TrialResult,
};
pub use experiment_c::{
    run_experiment_c, run_experiment_c_on, AltConvention, ExperimentCResult, GridRow, SourceNormality,
};
pub use report::{emit_report, read_report, ReportFormat};

/// Everything an experiment computed. Deterministic for a given config and
/// digit cache.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentId,
    /// Canonical `key = value` echo of the config that produced the report.
    pub config: BTreeMap<String, String>,
    pub result: ExperimentResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentResult {
    A(ExperimentAResult),
    B(ExperimentBResult),
    C(ExperimentCResult),
}

/// Run details that legitimately change between identical runs. Written to a
/// separate file so reports stay byte-comparable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub crate_version: String,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub metadata: RunMetadata,
}

/// Runs whichever experiment `config` names and times it.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun> {
    config.validate()?;
    let started_unix_seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let report = match config.experiment {
        ExperimentId::A => run_experiment_a(config)?,
        ExperimentId::B => run_experiment_b(config)?,
        ExperimentId::C => run_experiment_c(config)?,
    };
    report.validate()?;
    Ok(ExperimentRun {
        report,
        metadata: RunMetadata {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_seconds,
            wall_clock_seconds: clock.elapsed().as_secs_f64(),
            threads: if config.parallel { rayon::current_num_threads() } else { 1 },
        },
    })
}

fn require_experiment(config: &ExperimentConfig, id: ExperimentId) -> Result<()> {
    if config.experiment != id {
        return Err(crate::Error::Config(format!(
            "config is for experiment {}, not {id}",
            config.experiment
        )));
    }
    config.validate()
}
