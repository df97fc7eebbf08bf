use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{require_experiment, ExperimentConfig, ExperimentId, ExperimentReport, ExperimentResult};
use crate::bitseq::{make_windows, pattern_census, pattern_string, BitSequence, PatternBatch};
use crate::error::{Error, Result};
use crate::mlp::{correct_count, init_model, train};
use crate::mtprng::mt_binary_sequence;
use crate::stats::{self, MajorityLabel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub init_seed: u32,
    pub train_accuracy: f64,
    pub final_loss: f64,
    pub epochs: usize,
    /// Network output on the test input.
    pub output: f64,
    pub prediction: u8,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub seed: u32,
    pub source: String,
    pub test_start: usize,
    pub test_input: String,
    pub test_label: u8,
    /// Successor counts of the test input in the training census.
    pub majority: MajorityLabel,
    pub test_matches_majority: bool,
    pub ideal_rate: f64,
    pub trials: Vec<TrialResult>,
    pub success_count: usize,
    pub above_yardstick: usize,
    pub fraction_above_yardstick: f64,
    /// Matches score above half the trials, mismatches below.
    pub explained: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentBResult {
    pub trials_per_seed: usize,
    pub yardstick: f64,
    pub seeds: Vec<SeedResult>,
    pub success_counts: Vec<usize>,
    pub explained_seeds: usize,
}

/// Network initialisation seed of 1-based `trial` on sequence `seed`:
/// `seed·1000 + trial`, wrapping.
pub fn trial_init_seed(seed: u32, trial: usize) -> u32 {
    seed.wrapping_mul(1000).wrapping_add(trial as u32)
}

pub fn run_experiment_b(config: &ExperimentConfig) -> Result<ExperimentReport> {
    require_experiment(config, ExperimentId::B)?;
    let len = config.b_sequence_len();
    let seeds = config
        .mt_seeds
        .iter()
        .map(|&seed| {
            let bits = mt_binary_sequence(seed, len, config.mt_threshold);
            run_experiment_b_on(&bits, seed, config)
        })
        .collect::<Result<Vec<_>>>()?;
    let success_counts = seeds.iter().map(|s| s.success_count).collect();
    let explained_seeds = seeds.iter().filter(|s| s.explained).count();
    Ok(ExperimentReport {
        experiment: ExperimentId::B,
        config: config.to_pairs(),
        result: ExperimentResult::B(ExperimentBResult {
            trials_per_seed: config.trials,
            yardstick: config.yardstick,
            seeds,
            success_counts,
            explained_seeds,
        }),
    })
}

/// All trials for one sequence. `seed` labels the result and derives the
/// per-trial initialisation seeds.
pub fn run_experiment_b_on(bits: &BitSequence, seed: u32, config: &ExperimentConfig) -> Result<SeedResult> {
    config.validate()?;
    let input_len = config.input_len();
    let range = config.train_range;
    let test_start = config.b_test_start();
    if bits.len() < config.b_sequence_len() {
        return Err(Error::Capacity {
            what: format!("experiment b on {}", bits.source()),
            required: config.b_sequence_len(),
            available: bits.len(),
        });
    }
    let batch = make_windows(bits, range.start, range.count, input_len)?.batch();
    let test = make_windows(bits, test_start, 1, input_len)?
        .get(0)
        .expect("one test window");

    let region = BitSequence::new(bits.bits()[range.start - 1..range.end(input_len)].to_vec(), bits.source().clone())?;
    let census = pattern_census(&region, region.len(), config.census_length)?;
    let majority = stats::majority_label(&census, test.input as usize)?;
    let ideal_correct = stats::ideal_correct_count(&census)?;

    let run = |trial: usize| run_trial(&batch, seed, trial, test.input, test.label, ideal_correct, config);
    let trials: Vec<TrialResult> = if config.parallel {
        (1..=config.trials).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (1..=config.trials).map(run).collect::<Result<_>>()?
    };

    let success_count = trials.iter().filter(|t| t.correct).count();
    let above_yardstick = trials.iter().filter(|t| t.train_accuracy > config.yardstick).count();
    let fraction_above_yardstick = if trials.is_empty() {
        0.0
    } else {
        above_yardstick as f64 / trials.len() as f64
    };
    let test_matches_majority = majority.label == test.label;
    let explained = if test_matches_majority {
        2 * success_count > config.trials
    } else {
        2 * success_count < config.trials
    };
    Ok(SeedResult {
        seed,
        source: bits.source().to_string(),
        test_start,
        test_input: pattern_string(test.input as usize, input_len),
        test_label: test.label,
        majority,
        test_matches_majority,
        ideal_rate: ideal_correct as f64 / census.windows() as f64,
        trials,
        success_count,
        above_yardstick,
        fraction_above_yardstick,
        explained,
    })
}

fn run_trial(
    batch: &PatternBatch,
    seed: u32,
    trial: usize,
    test_input: u32,
    test_label: u8,
    ideal_correct: u64,
    config: &ExperimentConfig,
) -> Result<TrialResult> {
    let init_seed = trial_init_seed(seed, trial);
    let model = init_model(&config.layers, init_seed)?.with_encoding(config.train.input_encoding);
    let (model, log) = train(&model, batch, &config.train)?;
    let correct = correct_count(&model, batch)?;
    if correct > ideal_correct {
        return Err(Error::Validation(format!(
            "seed {seed} trial {trial}: {correct} correct exceeds the ideal predictor's {ideal_correct}"
        )));
    }
    let prediction = model.predict_code(test_input);
    Ok(TrialResult {
        trial,
        init_seed,
        train_accuracy: correct as f64 / batch.total() as f64,
        final_loss: log.epochs.last().map_or(f64::NAN, |e| e.loss),
        epochs: log.epochs.len(),
        output: model.forward_code(test_input),
        prediction,
        correct: prediction == test_label,
    })
}
