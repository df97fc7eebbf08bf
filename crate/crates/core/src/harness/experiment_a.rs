use serde::{Deserialize, Serialize};

use super::{cache, require_experiment, ExperimentConfig, ExperimentId, ExperimentReport, ExperimentResult, WindowRange};
use crate::bitseq::{binarize_digits, make_windows, pattern_census, BitSequence};
use crate::error::{Error, Result};
use crate::mlp::{correct_count, init_model, train, StopReason};
use crate::stats::{self, BINARY};

/// Score of one model on one window set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetResult {
    pub name: String,
    pub start: usize,
    pub count: usize,
    pub correct: u64,
    pub accuracy: f64,
    /// `(accuracy − 1/2) / σ` with `σ = 1/(2√count)`.
    pub sigma_level: f64,
    pub exceeds_3sigma: bool,
    pub exceeds_5sigma: bool,
}

impl DatasetResult {
    pub fn new(name: &str, range: WindowRange, correct: u64) -> Self {
        let n = range.count as u64;
        let accuracy = if n == 0 { 0.0 } else { correct as f64 / n as f64 };
        let (sigma_level, exceeds_3sigma, exceeds_5sigma) = if n == 0 {
            (0.0, false, false)
        } else {
            (
                stats::sigma_level(accuracy, n, BINARY),
                stats::sigma_exceeds(accuracy, n, BINARY, 3.0),
                stats::sigma_exceeds(accuracy, n, BINARY, 5.0),
            )
        };
        DatasetResult {
            name: name.to_string(),
            start: range.start,
            count: range.count,
            correct,
            accuracy,
            sigma_level,
            exceeds_3sigma,
            exceeds_5sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSummary {
    pub init_seed: u32,
    pub epochs: usize,
    pub stop_reason: StopReason,
    /// Loss at the start of every epoch.
    pub losses: Vec<f64>,
    pub final_gradient_norm: f64,
}

/// The per-prefix majority predictor on the training windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealBound {
    pub windows: u64,
    pub correct: u64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupResult {
    pub dataset: String,
    pub block_size: usize,
    pub correct: Vec<u64>,
    pub rates: Vec<f64>,
    pub mean: f64,
    pub std_dev: f64,
    pub confidence: f64,
    pub t: f64,
    pub lcl: f64,
    pub lcl_above_half: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentAResult {
    pub source: String,
    pub sequence_len: usize,
    pub layers: Vec<usize>,
    pub train: DatasetResult,
    pub training: TrainSummary,
    pub ideal: IdealBound,
    /// Test sets in configured order, named T1, T2, …
    pub tests: Vec<DatasetResult>,
    pub subgroups: SubgroupResult,
}

/// Experiment A on the configured constant, generating its digit cache if
/// needed.
pub fn run_experiment_a(config: &ExperimentConfig) -> Result<ExperimentReport> {
    require_experiment(config, ExperimentId::A)?;
    let required = config.a_required_digits();
    let digits = cache::ensure_cached_digits(&config.digit_cache_dir, config.constant, required)?;
    let bits = binarize_digits(&digits, config.digit_threshold);
    let result = run_experiment_a_on(&bits, config)?;
    Ok(ExperimentReport {
        experiment: ExperimentId::A,
        config: config.to_pairs(),
        result: ExperimentResult::A(result),
    })
}

/// Experiment A on an arbitrary bit sequence; `config.constant` is ignored.
pub fn run_experiment_a_on(bits: &BitSequence, config: &ExperimentConfig) -> Result<ExperimentAResult> {
    config.validate()?;
    let input_len = config.input_len();
    let required = config.a_required_digits();
    if bits.len() < required {
        return Err(Error::Capacity {
            what: format!("experiment a on {}", bits.source()),
            required,
            available: bits.len(),
        });
    }

    let train_range = config.train_range;
    let train_set = make_windows(bits, train_range.start, train_range.count, input_len)?;
    let train_batch = train_set.batch();
    let model = init_model(&config.layers, config.train.init_seed)?.with_encoding(config.train.input_encoding);
    let (model, log) = train(&model, &train_batch, &config.train)?;
    let train = DatasetResult::new("train", train_range, correct_count(&model, &train_batch)?);

    let end = train_range.end(input_len);
    let region = BitSequence::new(bits.bits()[train_range.start - 1..end].to_vec(), bits.source().clone())?;
    let census = pattern_census(&region, region.len(), config.census_length)?;
    let ideal = IdealBound {
        windows: census.windows(),
        correct: stats::ideal_correct_count(&census)?,
        rate: stats::ideal_predictor_rate(&census)?,
    };
    if train.correct > ideal.correct {
        return Err(Error::Validation(format!(
            "training accuracy {} exceeds the ideal-predictor rate {}",
            train.accuracy, ideal.rate
        )));
    }

    let largest = config.largest_test_range();
    let mut tests = Vec::with_capacity(config.test_ranges.len());
    let mut subgroups = None;
    for (i, &range) in config.test_ranges.iter().enumerate() {
        let name = format!("T{}", i + 1);
        let set = make_windows(bits, range.start, range.count, input_len)?;
        tests.push(DatasetResult::new(&name, range, correct_count(&model, &set.batch())?));
        if range == largest && subgroups.is_none() {
            let blocks = set.split(config.subgroups)?;
            let correct = blocks
                .iter()
                .map(|b| correct_count(&model, &b.batch()))
                .collect::<Result<Vec<u64>>>()?;
            subgroups = Some(summarise_subgroups(&name, range.count / config.subgroups, correct, config.confidence)?);
        }
    }

    let last = log.epochs.last().copied();
    Ok(ExperimentAResult {
        source: bits.source().to_string(),
        sequence_len: bits.len(),
        layers: config.layers.clone(),
        train,
        training: TrainSummary {
            init_seed: config.train.init_seed,
            epochs: log.epochs.len(),
            stop_reason: log.stop_reason,
            losses: log.epochs.iter().map(|e| e.loss).collect(),
            final_gradient_norm: last.map_or(0.0, |e| e.gradient_norm),
        },
        ideal,
        tests,
        subgroups: subgroups.expect("largest test range is among the test ranges"),
    })
}

fn summarise_subgroups(dataset: &str, block_size: usize, correct: Vec<u64>, confidence: f64) -> Result<SubgroupResult> {
    let rates: Vec<f64> = correct.iter().map(|&c| c as f64 / block_size as f64).collect();
    let s = stats::subgroup_summary(&rates, confidence)?;
    Ok(SubgroupResult {
        dataset: dataset.to_string(),
        block_size,
        correct,
        rates,
        mean: s.mean,
        std_dev: s.std_dev,
        confidence,
        t: s.t,
        lcl: s.lcl,
        lcl_above_half: s.lcl > 0.5,
    })
}
