use serde::{Deserialize, Serialize};

use super::{cache, require_experiment, ExperimentConfig, ExperimentId, ExperimentReport, ExperimentResult};
use crate::bitseq::{binarize_digits, pattern_census, BitSequence};
use crate::error::Result;
use crate::mtprng::mt_binary_sequence;
use crate::stats::{normality_test, NormalityReport};

/// The statistic recomputed with the other threshold convention (`> t`
/// instead of `≥ t`, or vice versa).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AltConvention {
    pub source: String,
    pub statistic: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub n: usize,
    pub ones_frequency: f64,
    pub normality: NormalityReport,
    /// `k·√(2^L − 1) / (2^L·√W)`, one per-string standard-deviation band.
    pub frequency_band: f64,
    /// Largest `|frequency − 2^−L|` over all strings.
    pub max_frequency_deviation: f64,
    pub within_band: bool,
    pub alt_convention: Option<AltConvention>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceNormality {
    /// Short name used in file names: `pi`, `sqrt2`, `mt1`, …
    pub label: String,
    pub source: String,
    pub rows: Vec<GridRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentCResult {
    pub census_length: usize,
    pub k: f64,
    pub sources: Vec<SourceNormality>,
}

/// Experiment C over cached digits. Caches are never generated here; a
/// missing or short cache is a capacity error.
pub fn run_experiment_c(config: &ExperimentConfig) -> Result<ExperimentReport> {
    require_experiment(config, ExperimentId::C)?;
    let n_max = config.n_grid.iter().copied().max().unwrap_or(0);
    let mut sources = Vec::new();
    for &constant in &config.constants {
        let digits = cache::load_cached_digits(&config.digit_cache_dir, constant, n_max)?;
        let bits = binarize_digits(&digits, config.digit_threshold);
        let alt = binarize_digits(&digits, config.digit_threshold.toggled());
        sources.push(run_experiment_c_on(constant.name(), &bits, Some(&alt), config)?);
    }
    if config.mt_control {
        let bits = mt_binary_sequence(config.mt_control_seed, n_max, config.mt_threshold);
        sources.push(run_experiment_c_on(&format!("mt{}", config.mt_control_seed), &bits, None, config)?);
    }
    Ok(ExperimentReport {
        experiment: ExperimentId::C,
        config: config.to_pairs(),
        result: ExperimentResult::C(ExperimentCResult {
            census_length: config.census_length,
            k: config.sigma_k,
            sources,
        }),
    })
}

/// The n-grid for one sequence, optionally alongside the same digits
/// binarized under the other threshold convention.
pub fn run_experiment_c_on(
    label: &str,
    bits: &BitSequence,
    alt: Option<&BitSequence>,
    config: &ExperimentConfig,
) -> Result<SourceNormality> {
    let length = config.census_length;
    let k = config.sigma_k;
    let strings = (1u64 << length) as f64;
    let rows = config
        .n_grid
        .iter()
        .map(|&n| {
            let normality = normality_test(&pattern_census(bits, n, length)?, k)?;
            let w = normality.windows as f64;
            let frequency_band = k * (strings - 1.0).sqrt() / (strings * w.sqrt());
            let max_frequency_deviation = normality
                .frequencies
                .iter()
                .map(|f| (f - 1.0 / strings).abs())
                .fold(0.0, f64::max);
            let alt_convention = alt
                .map(|a| -> Result<AltConvention> {
                    let r = normality_test(&pattern_census(a, n, length)?, k)?;
                    Ok(AltConvention {
                        source: a.source().to_string(),
                        statistic: r.statistic,
                        violated: r.violated,
                    })
                })
                .transpose()?;
            Ok(GridRow {
                n,
                ones_frequency: bits.ones_frequency(n)?,
                frequency_band,
                max_frequency_deviation,
                within_band: max_frequency_deviation <= frequency_band,
                normality,
                alt_convention,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SourceNormality {
        label: label.to_string(),
        source: bits.source().to_string(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constdigits::{gen_digits, save_digit_file, Constant};
    use crate::error::Error;

    fn config(dir: &std::path::Path) -> ExperimentConfig {
        let mut c = ExperimentConfig::defaults(ExperimentId::C);
        c.n_grid = vec![1_000, 5_000];
        c.digit_cache_dir = dir.to_path_buf();
        c
    }

    #[test]
    fn refuses_missing_caches() {
        let dir = tempfile::tempdir().unwrap();
        match run_experiment_c(&config(dir.path())) {
            Err(Error::Capacity { required: 5_000, available: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(!cache::cache_path(dir.path(), Constant::Pi).exists());
    }

    #[test]
    fn grid_over_small_caches() {
        let dir = tempfile::tempdir().unwrap();
        for c in [Constant::Pi, Constant::Sqrt2] {
            save_digit_file(&gen_digits(c, 6_000).unwrap(), cache::cache_path(dir.path(), c)).unwrap();
        }
        let report = run_experiment_c(&config(dir.path())).unwrap();
        let ExperimentResult::C(r) = report.result else { panic!() };
        let labels: Vec<&str> = r.sources.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["pi", "sqrt2", "mt1"]);
        for s in &r.sources {
            assert_eq!(s.rows.len(), 2);
            for row in &s.rows {
                assert_eq!(row.normality.windows, row.n as u64 - 6);
                assert_eq!(row.normality.counts.len(), 128);
                assert_eq!(row.alt_convention.is_some(), s.label != "mt1");
                assert_eq!(row.normality.violated, row.normality.statistic > row.normality.bound);
            }
        }
        assert_eq!(r.sources[0].rows[1].alt_convention.as_ref().unwrap().source, "digits:pi:gt5");
    }

    #[test]
    fn alternating_control_is_violated() {
        let bits: Vec<u8> = (0..2_000).map(|i| (i % 2) as u8).collect();
        let seq = BitSequence::new(bits, crate::bitseq::BitSource::Other { label: "alt".into() }).unwrap();
        let mut c = ExperimentConfig::defaults(ExperimentId::C);
        c.n_grid = vec![2_000];
        let s = run_experiment_c_on("alt", &seq, None, &c).unwrap();
        assert_eq!(s.rows[0].normality.statistic, 1.0);
        assert!(s.rows[0].normality.violated);
        assert!(!s.rows[0].within_band);
    }
}
