//! Fully connected feed-forward network trained by full-batch momentum
//! back-propagation on mean squared error.
//!
//! Hidden layers use `tanh`, the single output unit is a logistic sigmoid, so
//! the output reads as P(next bit = 1). Inputs are bits, optionally mapped to
//! ±1 before entering the first layer.
//!
//! Datasets are consumed as [`PatternBatch`] tallies: with 6-bit inputs there
//! are at most 64 distinct rows, and the full-batch loss and gradient are
//! exact weighted sums over those rows.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitseq::PatternBatch;
use crate::error::{Error, Result};
use crate::mtprng::MtState;

/// The network shape used throughout the experiments.
pub const DEFAULT_LAYERS: [usize; 4] = [6, 30, 20, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputEncoding {
    /// bit b enters as 2b − 1.
    #[default]
    PlusMinus,
    /// bit b enters as b.
    ZeroOne,
}

impl InputEncoding {
    #[inline]
    fn encode(self, bit: u32) -> f64 {
        match self {
            InputEncoding::PlusMinus => 2.0 * bit as f64 - 1.0,
            InputEncoding::ZeroOne => bit as f64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InputEncoding::PlusMinus => "plusminus",
            InputEncoding::ZeroOne => "zeroone",
        }
    }
}

impl FromStr for InputEncoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plusminus" => Ok(InputEncoding::PlusMinus),
            "zeroone" => Ok(InputEncoding::ZeroOne),
            _ => Err(Error::Config(format!(
                "unknown input encoding `{s}` (expected plusminus or zeroone)"
            ))),
        }
    }
}

/// Network parameters in one flat vector. Layer `l` maps `sizes[l]` units to
/// `sizes[l + 1]` units and stores its `to × from` weight matrix row-major,
/// followed by its `to` biases.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    layer_sizes: Vec<usize>,
    params: Vec<f64>,
    encoding: InputEncoding,
}

impl MlpModel {
    /// A model with every parameter zero.
    pub fn zeros(layer_sizes: &[usize]) -> Result<Self> {
        validate_sizes(layer_sizes)?;
        Ok(MlpModel {
            layer_sizes: layer_sizes.to_vec(),
            params: vec![0.0; param_count(layer_sizes)],
            encoding: InputEncoding::default(),
        })
    }

    pub fn with_encoding(mut self, encoding: InputEncoding) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn encoding(&self) -> InputEncoding {
        self.encoding
    }

    pub fn input_len(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn offsets(&self, layer: usize) -> (usize, usize) {
        let mut off = 0;
        for l in 0..layer {
            off += self.layer_sizes[l + 1] * (self.layer_sizes[l] + 1);
        }
        let weights = self.layer_sizes[layer + 1] * self.layer_sizes[layer];
        (off, off + weights)
    }

    /// Row-major `to × from` weight matrix of layer `layer` (0-based).
    pub fn weights(&self, layer: usize) -> &[f64] {
        let (w, b) = self.offsets(layer);
        &self.params[w..b]
    }

    pub fn weights_mut(&mut self, layer: usize) -> &mut [f64] {
        let (w, b) = self.offsets(layer);
        &mut self.params[w..b]
    }

    pub fn biases(&self, layer: usize) -> &[f64] {
        let (_, b) = self.offsets(layer);
        &self.params[b..b + self.layer_sizes[layer + 1]]
    }

    pub fn biases_mut(&mut self, layer: usize) -> &mut [f64] {
        let (_, b) = self.offsets(layer);
        let n = self.layer_sizes[layer + 1];
        &mut self.params[b..b + n]
    }

    pub fn layer_count(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    /// Output for an input given as individual bits.
    pub fn forward(&self, input: &[u8]) -> Result<f64> {
        let code = self.input_code(input)?;
        Ok(self.forward_code(code))
    }

    /// 1 when the output is ≥ 0.5, else 0.
    pub fn predict_bit(&self, input: &[u8]) -> Result<u8> {
        Ok(u8::from(self.forward(input)? >= 0.5))
    }

    fn input_code(&self, input: &[u8]) -> Result<u32> {
        if input.len() != self.input_len() {
            return Err(Error::Domain(format!(
                "input has {} bits, network expects {}",
                input.len(),
                self.input_len()
            )));
        }
        if input.iter().any(|&b| b > 1) {
            return Err(Error::Domain("network inputs must be bits".into()));
        }
        Ok(input.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32))
    }

    /// Output for an input packed as an integer, earliest bit most significant.
    pub fn forward_code(&self, code: u32) -> f64 {
        let mut ws = Workspace::new(&self.layer_sizes);
        self.forward_into(code, &mut ws)
    }

    pub fn predict_code(&self, code: u32) -> u8 {
        u8::from(self.forward_code(code) >= 0.5)
    }

    /// Predicted bit for every possible input, indexed by input value.
    pub fn prediction_table(&self) -> Vec<u8> {
        let mut ws = Workspace::new(&self.layer_sizes);
        (0..1u32 << self.input_len())
            .map(|code| u8::from(self.forward_into(code, &mut ws) >= 0.5))
            .collect()
    }

    fn forward_into(&self, code: u32, ws: &mut Workspace) -> f64 {
        let n_in = self.input_len();
        for (i, a) in ws.acts[0].iter_mut().enumerate() {
            *a = self.encoding.encode((code >> (n_in - 1 - i)) & 1);
        }
        let last = self.layer_count() - 1;
        for l in 0..self.layer_count() {
            let (w_off, b_off) = self.offsets(l);
            let from = self.layer_sizes[l];
            let to = self.layer_sizes[l + 1];
            let (prev, next) = ws.acts.split_at_mut(l + 1);
            let input = &prev[l];
            let out = &mut next[0];
            for j in 0..to {
                let row = &self.params[w_off + j * from..w_off + (j + 1) * from];
                let z = self.params[b_off + j]
                    + row.iter().zip(input.iter()).map(|(w, a)| w * a).sum::<f64>();
                out[j] = if l == last { sigmoid(z) } else { z.tanh() };
            }
        }
        ws.acts[self.layer_count()][0]
    }
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn validate_sizes(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 {
        return Err(Error::Domain("a network needs at least an input and an output layer".into()));
    }
    if layer_sizes.contains(&0) {
        return Err(Error::Domain("layer sizes must be at least 1".into()));
    }
    if *layer_sizes.last().unwrap() != 1 {
        return Err(Error::Domain("the output layer must have exactly one unit".into()));
    }
    if layer_sizes[0] > 24 {
        return Err(Error::Domain("at most 24 input bits are supported".into()));
    }
    Ok(())
}

fn param_count(layer_sizes: &[usize]) -> usize {
    layer_sizes.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
}

/// Weights uniform in `[−1/√fan_in, 1/√fan_in)` from an MT19937 stream seeded
/// with `seed`, drawn layer by layer in row-major order; biases zero.
pub fn init_model(layer_sizes: &[usize], seed: u32) -> Result<MlpModel> {
    let mut model = MlpModel::zeros(layer_sizes)?;
    let mut rng = MtState::new(seed);
    for l in 0..model.layer_count() {
        let range = 1.0 / (layer_sizes[l] as f64).sqrt();
        for w in model.weights_mut(l) {
            *w = (2.0 * rng.next_real53() - 1.0) * range;
        }
    }
    Ok(model)
}

struct Workspace {
    acts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

impl Workspace {
    fn new(sizes: &[usize]) -> Self {
        Workspace {
            acts: sizes.iter().map(|&s| vec![0.0; s]).collect(),
            deltas: sizes.iter().map(|&s| vec![0.0; s]).collect(),
        }
    }
}

fn check_batch(model: &MlpModel, batch: &PatternBatch) -> Result<u64> {
    if batch.input_len() != model.input_len() {
        return Err(Error::Domain(format!(
            "dataset inputs have {} bits, network expects {}",
            batch.input_len(),
            model.input_len()
        )));
    }
    let total = batch.total();
    if total == 0 {
        return Err(Error::Domain("empty dataset".into()));
    }
    Ok(total)
}

/// Mean over instances of `(output − label)²`.
pub fn loss(model: &MlpModel, batch: &PatternBatch) -> Result<f64> {
    let total = check_batch(model, batch)?;
    let mut ws = Workspace::new(&model.layer_sizes);
    let mut sum = 0.0;
    for (code, [c0, c1]) in batch.occupied() {
        let o = model.forward_into(code, &mut ws);
        sum += c0 as f64 * o * o + c1 as f64 * (1.0 - o) * (1.0 - o);
    }
    Ok(sum / total as f64)
}

/// Loss and its exact gradient, laid out like [`MlpModel::params`].
pub fn loss_and_gradient(model: &MlpModel, batch: &PatternBatch) -> Result<(f64, Vec<f64>)> {
    let total = check_batch(model, batch)? as f64;
    let mut grad = vec![0.0; model.params.len()];
    let mut ws = Workspace::new(&model.layer_sizes);
    let layers = model.layer_count();
    let mut sum = 0.0;

    for (code, [c0, c1]) in batch.occupied() {
        let (c0, c1) = (c0 as f64, c1 as f64);
        let o = model.forward_into(code, &mut ws);
        sum += c0 * o * o + c1 * (1.0 - o) * (1.0 - o);

        // d/do of the summed squared error, divided by N.
        let d_out = 2.0 * ((c0 + c1) * o - c1) / total;
        ws.deltas[layers][0] = d_out * o * (1.0 - o);

        for l in (0..layers).rev() {
            let (w_off, b_off) = model.offsets(l);
            let from = model.layer_sizes[l];
            let to = model.layer_sizes[l + 1];
            for j in 0..to {
                let d = ws.deltas[l + 1][j];
                grad[b_off + j] += d;
                let g_row = &mut grad[w_off + j * from..w_off + (j + 1) * from];
                for (g, a) in g_row.iter_mut().zip(&ws.acts[l]) {
                    *g += d * a;
                }
            }
            if l > 0 {
                for i in 0..from {
                    let mut back = 0.0;
                    for j in 0..to {
                        back += model.params[w_off + j * from + i] * ws.deltas[l + 1][j];
                    }
                    let a = ws.acts[l][i];
                    ws.deltas[l][i] = back * (1.0 - a * a);
                }
            }
        }
    }
    Ok((sum / total, grad))
}

pub fn gradient(model: &MlpModel, batch: &PatternBatch) -> Result<Vec<f64>> {
    loss_and_gradient(model, batch).map(|(_, g)| g)
}

/// Number of instances whose label equals the predicted bit.
pub fn correct_count(model: &MlpModel, batch: &PatternBatch) -> Result<u64> {
    check_batch(model, batch)?;
    let table = model.prediction_table();
    Ok(batch
        .occupied()
        .map(|(code, counts)| counts[table[code as usize] as usize])
        .sum())
}

/// Fraction of instances predicted correctly.
pub fn accuracy(model: &MlpModel, batch: &PatternBatch) -> Result<f64> {
    let correct = correct_count(model, batch)?;
    Ok(correct as f64 / batch.total() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub max_epochs: usize,
    /// Training stops once the L2 norm of the full gradient falls below this.
    pub min_gradient: f64,
    pub init_seed: u32,
    pub input_encoding: InputEncoding,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.05,
            momentum: 0.95,
            max_epochs: 100,
            min_gradient: 1e-10,
            init_seed: 1,
            input_encoding: InputEncoding::PlusMinus,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!("learning_rate must be > 0, got {}", self.learning_rate)));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!("momentum must be in [0, 1), got {}", self.momentum)));
        }
        if self.max_epochs == 0 {
            return Err(Error::Config("max_epochs must be at least 1".into()));
        }
        if self.min_gradient.is_nan() || self.min_gradient < 0.0 {
            return Err(Error::Config(format!("min_gradient must be ≥ 0, got {}", self.min_gradient)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxEpochs,
    MinGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub loss: f64,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub epochs: Vec<EpochRecord>,
    pub stop_reason: StopReason,
}

/// Full-batch gradient descent with classical momentum:
/// `v ← momentum·v − learning_rate·∇L`, `θ ← θ + v`, starting from `v = 0`.
///
/// Each epoch records the loss and gradient norm at the current parameters,
/// then stops if the norm is below `min_gradient`, otherwise steps.
pub fn train(model: &MlpModel, batch: &PatternBatch, config: &TrainConfig) -> Result<(MlpModel, TrainLog)> {
    config.validate()?;
    check_batch(model, batch)?;
    if model.encoding != config.input_encoding {
        return Err(Error::Domain(format!(
            "model uses {} inputs but the training config asks for {}",
            model.encoding.name(),
            config.input_encoding.name()
        )));
    }
    let mut model = model.clone();
    let mut velocity = vec![0.0; model.params.len()];
    let mut epochs = Vec::with_capacity(config.max_epochs);
    let mut stop_reason = StopReason::MaxEpochs;

    for epoch in 1..=config.max_epochs {
        let (loss, grad) = loss_and_gradient(&model, batch)?;
        if !loss.is_finite() {
            return Err(Error::Divergence { epoch, loss });
        }
        let gradient_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        epochs.push(EpochRecord { loss, gradient_norm });
        if gradient_norm < config.min_gradient {
            stop_reason = StopReason::MinGradient;
            break;
        }
        for ((p, v), g) in model.params.iter_mut().zip(velocity.iter_mut()).zip(&grad) {
            *v = config.momentum * *v - config.learning_rate * g;
            *p += *v;
        }
        if model.params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Divergence { epoch, loss: f64::NAN });
        }
    }
    Ok((model, TrainLog { epochs, stop_reason }))
}

// --- serialization ---------------------------------------------------------

const MODEL_MAGIC: &str = "#pseudodice-mlp";

impl MlpModel {
    /// Text form: a magic line, `layers …`, `encoding …`, then for each layer
    /// one line per weight row followed by one bias line, all values printed
    /// with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MODEL_MAGIC}");
        let sizes: Vec<String> = self.layer_sizes.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "layers {}", sizes.join(" "));
        let _ = writeln!(s, "encoding {}", self.encoding.name());
        for l in 0..self.layer_count() {
            let from = self.layer_sizes[l];
            for row in self.weights(l).chunks(from) {
                let _ = writeln!(s, "w{} {}", l + 1, join_values(row));
            }
            let _ = writeln!(s, "b{} {}", l + 1, join_values(self.biases(l)));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::format(text.len(), format!("missing {what}")))
        };
        let (_, magic) = next("header")?;
        if magic.trim() != MODEL_MAGIC {
            return Err(Error::format(0, "not a model file"));
        }
        let (ln, layers) = next("layers line")?;
        let sizes: Vec<usize> = tagged(layers, "layers", ln)?
            .iter()
            .map(|v| v.parse().map_err(|_| Error::format(ln, format!("bad layer size `{v}`"))))
            .collect::<Result<_>>()?;
        let (ln, enc) = next("encoding line")?;
        let enc = tagged(enc, "encoding", ln)?;
        let encoding = enc
            .first()
            .ok_or_else(|| Error::format(ln, "missing encoding"))?
            .parse::<InputEncoding>()
            .map_err(|e| Error::format(ln, e.to_string()))?;
        let mut model = MlpModel::zeros(&sizes)
            .map_err(|e| Error::format(0, e.to_string()))?
            .with_encoding(encoding);
        for l in 0..model.layer_count() {
            let from = sizes[l];
            let to = sizes[l + 1];
            for j in 0..to {
                let (ln, row) = next("weight row")?;
                let values = parse_values(&tagged(row, &format!("w{}", l + 1), ln)?, from, ln)?;
                model.weights_mut(l)[j * from..(j + 1) * from].copy_from_slice(&values);
            }
            let (ln, row) = next("bias line")?;
            let values = parse_values(&tagged(row, &format!("b{}", l + 1), ln)?, to, ln)?;
            model.biases_mut(l).copy_from_slice(&values);
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        MlpModel::from_text(&text)
    }
}

fn join_values(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(" ")
}

// Line numbers stand in for offsets in model-file errors.
fn tagged<'a>(line: &'a str, tag: &str, ln: usize) -> Result<Vec<&'a str>> {
    let mut parts = line.split_ascii_whitespace();
    if parts.next() != Some(tag) {
        return Err(Error::format(ln, format!("expected `{tag}` line")));
    }
    Ok(parts.collect())
}

fn parse_values(tokens: &[&str], expected: usize, ln: usize) -> Result<Vec<f64>> {
    if tokens.len() != expected {
        return Err(Error::format(ln, format!("expected {expected} values, found {}", tokens.len())));
    }
    tokens
        .iter()
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::format(ln, format!("bad parameter `{t}`"))),
        })
        .collect()
}
