//! 0/1 sequences, sliding-window datasets and overlapping pattern counts.
//!
//! Positions are 1-indexed at the API surface. Bit strings are encoded as
//! integers with the leftmost (earliest) bit most significant, so the window
//! `011000` followed by label `1` is census value `0b0110001`.

mod census;
mod file;
mod window;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constdigits::{Constant, DigitStream};
use crate::error::{Error, Result};

pub use census::{pattern_census, pattern_string, PatternCensus, MAX_CENSUS_LENGTH};
pub use file::{load_bit_file, save_bit_file};
pub use window::{make_windows, Instance, PatternBatch, WindowDataset, DEFAULT_INPUT_LEN};

/// How a decimal digit maps to a bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitThreshold {
    pub value: u8,
    /// `true`: digit ≥ value → 1. `false`: digit > value → 1.
    pub inclusive: bool,
}

impl DigitThreshold {
    pub const fn inclusive(value: u8) -> Self {
        DigitThreshold { value, inclusive: true }
    }

    pub const fn exclusive(value: u8) -> Self {
        DigitThreshold { value, inclusive: false }
    }

    #[inline]
    pub fn apply(self, digit: u8) -> u8 {
        if self.inclusive {
            u8::from(digit >= self.value)
        } else {
            u8::from(digit > self.value)
        }
    }

    /// The opposite inclusivity at the same value.
    pub fn toggled(self) -> Self {
        DigitThreshold {
            inclusive: !self.inclusive,
            ..self
        }
    }
}

impl Default for DigitThreshold {
    fn default() -> Self {
        DigitThreshold::inclusive(5)
    }
}

/// Provenance of a [`BitSequence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BitSource {
    Digits {
        constant: Constant,
        threshold: DigitThreshold,
    },
    Mt {
        seed: u32,
        threshold: f64,
    },
    /// Anything else: synthetic controls, externally supplied files.
    Other { label: String },
}

impl fmt::Display for BitSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitSource::Digits {
                constant,
                threshold,
            } => {
                let op = if threshold.inclusive { "ge" } else { "gt" };
                write!(f, "digits:{constant}:{op}{}", threshold.value)
            }
            BitSource::Mt { seed, threshold } => write!(f, "mt19937:{seed}:ge{threshold}"),
            BitSource::Other { label } => write!(f, "other:{label}"),
        }
    }
}

impl FromStr for BitSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("unrecognised bit source `{s}`"));
        let parts: Vec<&str> = s.splitn(3, ':').collect();
        match parts.as_slice() {
            ["digits", constant, rule] => {
                let constant = constant.parse::<Constant>().map_err(|_| bad())?;
                let (inclusive, value) = if let Some(v) = rule.strip_prefix("ge") {
                    (true, v)
                } else if let Some(v) = rule.strip_prefix("gt") {
                    (false, v)
                } else {
                    return Err(bad());
                };
                let value = value.parse::<u8>().map_err(|_| bad())?;
                Ok(BitSource::Digits {
                    constant,
                    threshold: DigitThreshold { value, inclusive },
                })
            }
            ["mt19937", seed, rule] => {
                let seed = seed.parse().map_err(|_| bad())?;
                let threshold = rule
                    .strip_prefix("ge")
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(bad)?;
                Ok(BitSource::Mt { seed, threshold })
            }
            ["other", rest @ ..] if !rest.is_empty() => Ok(BitSource::Other {
                label: rest.join(":"),
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BitSequence {
    bits: Vec<u8>,
    source: BitSource,
}

impl BitSequence {
    /// Builds a sequence, rejecting any element other than 0 or 1.
    pub fn new(bits: Vec<u8>, source: BitSource) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::Domain(format!(
                "element {} at position {} is not a bit",
                bits[pos],
                pos + 1
            )));
        }
        Ok(BitSequence { bits, source })
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>, source: BitSource) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitSequence { bits, source }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn source(&self) -> &BitSource {
        &self.source
    }

    /// Fraction of ones among the first `n` bits.
    pub fn ones_frequency(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.bits.len() {
            return Err(Error::Bounds(format!(
                "ones_frequency over {n} bits of a {}-bit sequence (need 1 ≤ n ≤ length)",
                self.bits.len()
            )));
        }
        let ones = self.bits[..n].iter().map(|&b| b as usize).sum::<usize>();
        Ok(ones as f64 / n as f64)
    }

    /// Every bit inverted; the source becomes `other:complement-of-…`.
    pub fn complement(&self) -> BitSequence {
        BitSequence {
            bits: self.bits.iter().map(|&b| b ^ 1).collect(),
            source: BitSource::Other {
                label: format!("complement-of-{}", self.source).replace(':', "-"),
            },
        }
    }
}

/// Maps every digit through `threshold` (default: digit ≥ 5 → 1).
pub fn binarize_digits(stream: &DigitStream, threshold: DigitThreshold) -> BitSequence {
    let bits = stream.digits().iter().map(|&d| threshold.apply(d)).collect();
    BitSequence {
        bits,
        source: BitSource::Digits {
            constant: stream.constant(),
            threshold,
        },
    }
}
