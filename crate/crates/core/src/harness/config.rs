//! Flat `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key must be
//! known; list values are comma separated; dataset ranges are `start:count`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitseq::DigitThreshold;
use crate::constdigits::Constant;
use crate::error::{Error, Result};
use crate::mlp::{InputEncoding, TrainConfig, DEFAULT_LAYERS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    A,
    B,
    C,
}

impl ExperimentId {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::A => "a",
            ExperimentId::B => "b",
            ExperimentId::C => "c",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(ExperimentId::A),
            "b" => Ok(ExperimentId::B),
            "c" => Ok(ExperimentId::C),
            _ => Err(Error::Config(format!("unknown experiment `{s}` (expected a, b or c)"))),
        }
    }
}

/// A contiguous block of windows: `count` instances from 1-indexed `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowRange {
    pub start: usize,
    pub count: usize,
}

impl WindowRange {
    pub const fn new(start: usize, count: usize) -> Self {
        WindowRange { start, count }
    }

    /// Last source position consumed, for windows of `input_len + 1` bits.
    pub fn end(&self, input_len: usize) -> usize {
        if self.count == 0 {
            self.start.saturating_sub(1)
        } else {
            self.start + self.count + input_len - 1
        }
    }
}

impl fmt::Display for WindowRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.count)
    }
}

impl FromStr for WindowRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("range `{s}` must be start:count")))?;
        Ok(WindowRange {
            start: parse_value("range start", a)?,
            count: parse_value("range count", b)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    /// Experiment A source.
    pub constant: Constant,
    /// Experiment C sources.
    pub constants: Vec<Constant>,
    pub digit_threshold: DigitThreshold,
    /// Experiment B sequence seeds.
    pub mt_seeds: Vec<u32>,
    pub mt_threshold: f64,
    pub layers: Vec<usize>,
    pub train: TrainConfig,
    pub train_range: WindowRange,
    /// Experiment A evaluation sets, reported as T1, T2, …
    pub test_ranges: Vec<WindowRange>,
    /// Experiment B independent training runs per seed.
    pub trials: usize,
    /// Experiment B training-accuracy reporting threshold.
    pub yardstick: f64,
    pub census_length: usize,
    pub sigma_k: f64,
    pub subgroups: usize,
    pub confidence: f64,
    /// Experiment C prefix lengths.
    pub n_grid: Vec<usize>,
    /// Experiment C: also test a fresh MT sequence.
    pub mt_control: bool,
    pub mt_control_seed: u32,
    pub digit_cache_dir: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub parallel: bool,
}

impl ExperimentConfig {
    /// Protocol defaults for one experiment.
    pub fn defaults(experiment: ExperimentId) -> Self {
        let train_range = match experiment {
            ExperimentId::B => WindowRange::new(1, 10_000),
            _ => WindowRange::new(1, 40_000),
        };
        ExperimentConfig {
            experiment,
            constant: Constant::Pi,
            constants: vec![Constant::Pi, Constant::Sqrt2],
            digit_threshold: DigitThreshold::default(),
            mt_seeds: (1..=9).collect(),
            mt_threshold: 0.5,
            layers: DEFAULT_LAYERS.to_vec(),
            train: TrainConfig::default(),
            train_range,
            test_ranges: vec![WindowRange::new(100_000, 900_000), WindowRange::new(999_000, 9_000_000)],
            trials: 100,
            yardstick: 0.515,
            census_length: 7,
            sigma_k: 5.0,
            subgroups: 9,
            confidence: 0.99,
            n_grid: vec![10_000, 100_000, 1_000_000, 9_000_000],
            mt_control: true,
            mt_control_seed: 1,
            digit_cache_dir: PathBuf::from("digits"),
            out_dir: None,
            parallel: true,
        }
    }

    pub fn input_len(&self) -> usize {
        self.layers[0]
    }

    /// Experiment B's single test window follows the training windows.
    pub fn b_test_start(&self) -> usize {
        self.train_range.start + self.train_range.count
    }

    /// Bits an Experiment B sequence must hold.
    pub fn b_sequence_len(&self) -> usize {
        self.b_test_start() + self.input_len()
    }

    /// Digits Experiment A must have available.
    pub fn a_required_digits(&self) -> usize {
        std::iter::once(&self.train_range)
            .chain(&self.test_ranges)
            .map(|r| r.end(self.input_len()))
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        if self.layers.len() < 2 || self.layers.contains(&0) || *self.layers.last().unwrap() != 1 {
            return Err(Error::Config(format!(
                "layers must be positive and end with a single output, got {:?}",
                self.layers
            )));
        }
        if self.input_len() > 16 {
            return Err(Error::Config("at most 16 input bits are supported".into()));
        }
        if self.census_length != self.input_len() + 1 {
            return Err(Error::Config(format!(
                "census_length ({}) must be the window length, input + label = {}",
                self.census_length,
                self.input_len() + 1
            )));
        }
        for r in std::iter::once(&self.train_range).chain(&self.test_ranges) {
            if r.start == 0 {
                return Err(Error::Config(format!("range {r}: positions are 1-indexed")));
            }
        }
        if self.train_range.count == 0 {
            return Err(Error::Config("the training range is empty".into()));
        }
        if self.digit_threshold.value > 9 {
            return Err(Error::Config("digit_threshold must be a decimal digit".into()));
        }
        if !(0.0..=1.0).contains(&self.mt_threshold) || !(0.0..=1.0).contains(&self.yardstick) {
            return Err(Error::Config("mt_threshold and yardstick must lie in [0, 1]".into()));
        }
        if !(self.sigma_k > 0.0 && self.sigma_k.is_finite()) {
            return Err(Error::Config("sigma_k must be positive".into()));
        }
        if self.experiment == ExperimentId::A {
            if self.test_ranges.is_empty() {
                return Err(Error::Config("experiment a needs at least one test range".into()));
            }
            let largest = self.largest_test_range();
            if self.subgroups < 2 || !largest.count.is_multiple_of(self.subgroups) {
                return Err(Error::Config(format!(
                    "the largest test set ({} instances) must split into {} ≥ 2 equal subgroups",
                    largest.count, self.subgroups
                )));
            }
            crate::stats::t_quantile(self.confidence, self.subgroups - 1)
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.experiment == ExperimentId::C && self.n_grid.iter().any(|&n| n < self.census_length) {
            return Err(Error::Config("every n in n_grid must be at least census_length".into()));
        }
        Ok(())
    }

    /// The test range with the most instances; the first wins ties.
    pub fn largest_test_range(&self) -> WindowRange {
        let mut best = self.test_ranges[0];
        for r in &self.test_ranges[1..] {
            if r.count > best.count {
                best = *r;
            }
        }
        best
    }

    /// Canonical `key → value` pairs; [`ExperimentConfig::from_pairs`] inverts it.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("experiment", self.experiment.to_string());
        put("constant", self.constant.to_string());
        put("constants", join(&self.constants));
        put("digit_threshold", self.digit_threshold.value.to_string());
        put("digit_threshold_inclusive", self.digit_threshold.inclusive.to_string());
        put("mt_seeds", join(&self.mt_seeds));
        put("mt_threshold", self.mt_threshold.to_string());
        put("layers", join(&self.layers));
        put("learning_rate", self.train.learning_rate.to_string());
        put("momentum", self.train.momentum.to_string());
        put("max_epochs", self.train.max_epochs.to_string());
        put("min_gradient", self.train.min_gradient.to_string());
        put("init_seed", self.train.init_seed.to_string());
        put("input_encoding", self.train.input_encoding.name().to_string());
        put("train_range", self.train_range.to_string());
        put("test_ranges", join(&self.test_ranges));
        put("trials", self.trials.to_string());
        put("yardstick", self.yardstick.to_string());
        put("census_length", self.census_length.to_string());
        put("sigma_k", self.sigma_k.to_string());
        put("subgroups", self.subgroups.to_string());
        put("confidence", self.confidence.to_string());
        put("n_grid", join(&self.n_grid));
        put("mt_control", self.mt_control.to_string());
        put("mt_control_seed", self.mt_control_seed.to_string());
        put("digit_cache_dir", self.digit_cache_dir.display().to_string());
        if let Some(out) = &self.out_dir {
            put("out_dir", out.display().to_string());
        }
        put("parallel", self.parallel.to_string());
        m
    }

    /// Starts from the defaults of `experiment` and applies `pairs`.
    pub fn from_pairs<'a>(
        experiment: ExperimentId,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut c = ExperimentConfig::defaults(experiment);
        for (key, value) in pairs {
            c.apply(key, value)?;
        }
        c.validate()?;
        Ok(c)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => {
                let id: ExperimentId = value.parse()?;
                if id != self.experiment {
                    return Err(Error::Config(format!(
                        "config is for experiment {id}, but experiment {} was requested",
                        self.experiment
                    )));
                }
            }
            "constant" => self.constant = value.parse()?,
            "constants" => self.constants = parse_list(key, value)?,
            "digit_threshold" => self.digit_threshold.value = parse_value(key, value)?,
            "digit_threshold_inclusive" => self.digit_threshold.inclusive = parse_value(key, value)?,
            "mt_seeds" => self.mt_seeds = parse_list(key, value)?,
            "mt_threshold" => self.mt_threshold = parse_value(key, value)?,
            "layers" => self.layers = parse_list(key, value)?,
            "learning_rate" => self.train.learning_rate = parse_value(key, value)?,
            "momentum" => self.train.momentum = parse_value(key, value)?,
            "max_epochs" => self.train.max_epochs = parse_value(key, value)?,
            "min_gradient" => self.train.min_gradient = parse_value(key, value)?,
            "init_seed" => self.train.init_seed = parse_value(key, value)?,
            "input_encoding" => self.train.input_encoding = value.parse::<InputEncoding>()?,
            "train_range" => self.train_range = value.parse()?,
            "test_ranges" => self.test_ranges = parse_list(key, value)?,
            "trials" => self.trials = parse_value(key, value)?,
            "yardstick" => self.yardstick = parse_value(key, value)?,
            "census_length" => self.census_length = parse_value(key, value)?,
            "sigma_k" => self.sigma_k = parse_value(key, value)?,
            "subgroups" => self.subgroups = parse_value(key, value)?,
            "confidence" => self.confidence = parse_value(key, value)?,
            "n_grid" => self.n_grid = parse_list(key, value)?,
            "mt_control" => self.mt_control = parse_value(key, value)?,
            "mt_control_seed" => self.mt_control_seed = parse_value(key, value)?,
            "digit_cache_dir" => self.digit_cache_dir = PathBuf::from(value),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "parallel" => self.parallel = parse_value(key, value)?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn parse(experiment: ExperimentId, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !seen.insert(k) {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", i + 1)));
            }
            pairs.push((k, v));
        }
        ExperimentConfig::from_pairs(experiment, pairs)
    }

    pub fn load(experiment: ExperimentId, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ExperimentConfig::parse(experiment, &text)
    }

    pub fn to_text(&self) -> String {
        self.to_pairs()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse_value(key, v)).collect()
}
