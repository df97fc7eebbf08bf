use super::{BitSequence, BitSource};
use crate::error::{Error, Result};

pub const DEFAULT_INPUT_LEN: usize = 6;

/// One (input, label) pair. `input` holds `input_len` bits, earliest bit most
/// significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instance {
    pub input: u32,
    pub label: u8,
}

impl Instance {
    /// The input as individual bits, earliest first.
    pub fn input_bits(&self, input_len: usize) -> Vec<u8> {
        (0..input_len)
            .rev()
            .map(|shift| ((self.input >> shift) & 1) as u8)
            .collect()
    }
}

/// Stride-1 windows cut from a bit sequence. Instance `i` (1-indexed) spans
/// source positions `start + i − 1 ..= start + i − 1 + input_len`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowDataset {
    /// Source bits `start ..= start + count + input_len − 1`.
    bits: Vec<u8>,
    start: usize,
    count: usize,
    input_len: usize,
    source: BitSource,
}

/// Cuts `count` windows starting at 1-indexed position `start`. Consumes
/// source bits `start ..= start + count + input_len − 1`.
pub fn make_windows(
    bits: &BitSequence,
    start: usize,
    count: usize,
    input_len: usize,
) -> Result<WindowDataset> {
    if start == 0 {
        return Err(Error::Bounds("window start positions are 1-indexed".into()));
    }
    if input_len == 0 || input_len > 24 {
        return Err(Error::Domain(format!("input length must be in 1..=24, got {input_len}")));
    }
    let covered = if count == 0 {
        Vec::new()
    } else {
        let end = start + count + input_len - 1;
        if end > bits.len() {
            return Err(Error::Bounds(format!(
                "{count} windows of {} bits from position {start} need a sequence of at least {end} bits, have {}",
                input_len + 1,
                bits.len()
            )));
        }
        bits.bits()[start - 1..end].to_vec()
    };
    Ok(WindowDataset {
        bits: covered,
        start,
        count,
        input_len,
        source: bits.source().clone(),
    })
}

impl WindowDataset {
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// 1-indexed source position of the first instance.
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn source(&self) -> &BitSource {
        &self.source
    }

    /// Instance `i`, 0-indexed within the dataset.
    pub fn get(&self, i: usize) -> Option<Instance> {
        (i < self.count).then(|| {
            let window = &self.bits[i..i + self.input_len + 1];
            let input = window[..self.input_len]
                .iter()
                .fold(0u32, |acc, &b| (acc << 1) | b as u32);
            Instance {
                input,
                label: window[self.input_len],
            }
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Instance> + '_ {
        let mask = (1u32 << self.input_len) - 1;
        let mut input = if self.count == 0 {
            0
        } else {
            self.bits[..self.input_len]
                .iter()
                .fold(0u32, |acc, &b| (acc << 1) | b as u32)
        };
        (0..self.count).map(move |i| {
            if i > 0 {
                input = ((input << 1) | self.bits[i + self.input_len - 1] as u32) & mask;
            }
            Instance {
                input,
                label: self.bits[i + self.input_len],
            }
        })
    }

    /// Splits into `parts` contiguous blocks of equal size.
    pub fn split(&self, parts: usize) -> Result<Vec<WindowDataset>> {
        if parts == 0 || !self.count.is_multiple_of(parts) {
            return Err(Error::Domain(format!(
                "{} instances cannot be split into {parts} equal blocks",
                self.count
            )));
        }
        let size = self.count / parts;
        Ok((0..parts)
            .map(|p| {
                let off = p * size;
                WindowDataset {
                    bits: self.bits[off..off + size + self.input_len].to_vec(),
                    start: self.start + off,
                    count: size,
                    input_len: self.input_len,
                    source: self.source.clone(),
                }
            })
            .collect())
    }

    /// Label counts per distinct input.
    pub fn batch(&self) -> PatternBatch {
        let mut batch = PatternBatch::empty(self.input_len);
        for inst in self.iter() {
            batch.add(inst);
        }
        batch
    }
}

/// A dataset reduced to `(count of label 0, count of label 1)` per distinct
/// input. Every quantity the network computes over a dataset depends only on
/// these tallies, so training and evaluation run over at most `2^input_len`
/// rows regardless of the dataset size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternBatch {
    input_len: usize,
    counts: Vec<[u64; 2]>,
}

impl PatternBatch {
    pub fn empty(input_len: usize) -> Self {
        assert!(input_len <= 24, "input length {input_len} too large for a dense batch");
        PatternBatch {
            input_len,
            counts: vec![[0, 0]; 1 << input_len],
        }
    }

    pub fn from_instances(input_len: usize, instances: impl IntoIterator<Item = Instance>) -> Self {
        let mut batch = PatternBatch::empty(input_len);
        for inst in instances {
            batch.add(inst);
        }
        batch
    }

    pub fn add(&mut self, inst: Instance) {
        self.counts[inst.input as usize][inst.label as usize] += 1;
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    /// Total number of instances.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|c| c[0] + c[1]).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// `[label-0 count, label-1 count]` indexed by input value.
    pub fn counts(&self) -> &[[u64; 2]] {
        &self.counts
    }

    /// Inputs that occur at least once, with their label counts.
    pub fn occupied(&self) -> impl Iterator<Item = (u32, [u64; 2])> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| c[0] + c[1] > 0)
            .map(|(v, &c)| (v as u32, c))
    }

    /// The same inputs with every label inverted.
    pub fn flipped(&self) -> PatternBatch {
        PatternBatch {
            input_len: self.input_len,
            counts: self.counts.iter().map(|&[a, b]| [b, a]).collect(),
        }
    }

    /// Multiset union.
    pub fn merged(&self, other: &PatternBatch) -> Result<PatternBatch> {
        if self.input_len != other.input_len {
            return Err(Error::Domain("cannot merge batches of different input lengths".into()));
        }
        Ok(PatternBatch {
            input_len: self.input_len,
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| [a[0] + b[0], a[1] + b[1]])
                .collect(),
        })
    }
}
