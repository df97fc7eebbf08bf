use std::io::Write;

use serde::{Deserialize, Serialize};

use super::BitSequence;
use crate::error::{Error, Result};

/// Census storage is dense, so the string length is capped.
pub const MAX_CENSUS_LENGTH: usize = 24;

/// Overlapping occurrence counts of every length-`length` bit string among
/// the first `n` bits. `counts[v]` counts the string whose binary value is `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCensus {
    length: usize,
    n: usize,
    counts: Vec<u64>,
}

impl PatternCensus {
    /// Builds a census from raw counts; `counts.len()` must be `2^length` and
    /// sum to `n − length + 1`.
    pub fn from_counts(length: usize, n: usize, counts: Vec<u64>) -> Result<Self> {
        if length == 0 || length > MAX_CENSUS_LENGTH || counts.len() != 1 << length {
            return Err(Error::Domain(format!(
                "census of length {length} needs 2^{length} counters, got {}",
                counts.len()
            )));
        }
        if n < length || counts.iter().sum::<u64>() != (n - length + 1) as u64 {
            return Err(Error::Domain(format!(
                "census counts must sum to the window count {}",
                (n + 1).saturating_sub(length)
            )));
        }
        Ok(PatternCensus { length, n, counts })
    }

    /// String length |τ|.
    pub fn length(&self) -> usize {
        self.length
    }

    /// Leading bits scanned.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of windows, `n − length + 1`.
    pub fn windows(&self) -> u64 {
        (self.n - self.length + 1) as u64
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, pattern: usize) -> u64 {
        self.counts[pattern]
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let w = self.windows() as f64;
        self.counts.iter().map(|&c| c as f64 / w).collect()
    }

    /// `(count(prefix∘0), count(prefix∘1))` for a `length − 1`-bit prefix.
    pub fn successor_counts(&self, prefix: usize) -> (u64, u64) {
        (self.counts[prefix << 1], self.counts[(prefix << 1) | 1])
    }

    /// CSV with header `pattern,count,frequency` and one row per string.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "pattern,count,frequency")?;
        let w = self.windows() as f64;
        for (v, &c) in self.counts.iter().enumerate() {
            writeln!(out, "{},{},{}", pattern_string(v, self.length), c, c as f64 / w)?;
        }
        Ok(())
    }
}

/// `value` as a `length`-character binary string, most significant bit first.
pub fn pattern_string(value: usize, length: usize) -> String {
    format!("{value:0length$b}")
}

/// Counts every overlapping length-`length` window in the first `n` bits.
pub fn pattern_census(bits: &BitSequence, n: usize, length: usize) -> Result<PatternCensus> {
    if length == 0 || length > MAX_CENSUS_LENGTH {
        return Err(Error::Domain(format!(
            "census length must be in 1..={MAX_CENSUS_LENGTH}, got {length}"
        )));
    }
    if n < length || n > bits.len() {
        return Err(Error::Bounds(format!(
            "census over the first {n} bits with length {length} needs {length} ≤ n ≤ {}",
            bits.len()
        )));
    }
    let mask = (1usize << length) - 1;
    let mut counts = vec![0u64; 1 << length];
    let data = &bits.bits()[..n];
    let mut value = data[..length - 1]
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | b as usize);
    for &b in &data[length - 1..] {
        value = ((value << 1) | b as usize) & mask;
        counts[value] += 1;
    }
    Ok(PatternCensus { length, n, counts })
}
