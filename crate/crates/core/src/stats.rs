//! Chance-level significance, subgroup confidence limits, and the
//! ideal-predictor normality test.
//!
//! A predictor that guesses one of `b` symbols uniformly at random over `n`
//! trials has a success rate with mean `1/b` and standard deviation
//! `√(b−1) / (b·√n)`. The ideal next-bit predictor picks, for every
//! `(L−1)`-bit prefix, the successor seen most often; its in-sample rate is the
//! normality statistic, compared against `1/b + k·σ`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bitseq::{pattern_string, PatternCensus};
use crate::error::{Error, Result};

/// Binary alphabet.
pub const BINARY: u32 = 2;

/// Standard deviation of a pure-guess success rate over `n` trials.
pub fn null_sigma(b: u32, n: u64) -> f64 {
    assert!(b >= 2 && n >= 1, "null_sigma needs b ≥ 2 and n ≥ 1");
    ((b - 1) as f64).sqrt() / (b as f64 * (n as f64).sqrt())
}

/// `rate > 1/b + k·σ` (strict).
pub fn sigma_exceeds(rate: f64, n: u64, b: u32, k: f64) -> bool {
    rate > 1.0 / b as f64 + k * null_sigma(b, n)
}

/// How many null standard deviations `rate` lies above `1/b`.
pub fn sigma_level(rate: f64, n: u64, b: u32) -> f64 {
    (rate - 1.0 / b as f64) / null_sigma(b, n)
}

/// One-sided upper quantiles of Student's t, degrees of freedom 1..=30.
const T_TABLE: [(f64, [f64; 30]); 5] = [
    (0.90, [
        3.077684, 1.885618, 1.637744, 1.533206, 1.475884, 1.439756, 1.414924, 1.396815, 1.383029,
        1.372184, 1.363430, 1.356217, 1.350171, 1.345030, 1.340606, 1.336757, 1.333379, 1.330391,
        1.327728, 1.325341, 1.323188, 1.321237, 1.319460, 1.317836, 1.316345, 1.314972, 1.313703,
        1.312527, 1.311434, 1.310415,
    ]),
    (0.95, [
        6.313752, 2.919986, 2.353363, 2.131847, 2.015048, 1.943180, 1.894579, 1.859548, 1.833113,
        1.812461, 1.795885, 1.782288, 1.770933, 1.761310, 1.753050, 1.745884, 1.739607, 1.734064,
        1.729133, 1.724718, 1.720743, 1.717144, 1.713872, 1.710882, 1.708141, 1.705618, 1.703288,
        1.701131, 1.699127, 1.697261,
    ]),
    (0.975, [
        12.706205, 4.302653, 3.182446, 2.776445, 2.570582, 2.446912, 2.364624, 2.306004, 2.262157,
        2.228139, 2.200985, 2.178813, 2.160369, 2.144787, 2.131450, 2.119905, 2.109816, 2.100922,
        2.093024, 2.085963, 2.079614, 2.073873, 2.068658, 2.063899, 2.059539, 2.055529, 2.051831,
        2.048407, 2.045230, 2.042272,
    ]),
    (0.99, [
        31.820516, 6.964557, 4.540703, 3.746947, 3.364930, 3.142668, 2.997952, 2.896459, 2.821438,
        2.763769, 2.718079, 2.680998, 2.650309, 2.624494, 2.602480, 2.583487, 2.566934, 2.552380,
        2.539483, 2.527977, 2.517648, 2.508325, 2.499867, 2.492159, 2.485107, 2.478630, 2.472660,
        2.467140, 2.462021, 2.457262,
    ]),
    (0.995, [
        63.656741, 9.924843, 5.840909, 4.604095, 4.032143, 3.707428, 3.499483, 3.355387, 3.249836,
        3.169273, 3.105807, 3.054540, 3.012276, 2.976843, 2.946713, 2.920782, 2.898231, 2.878440,
        2.860935, 2.845340, 2.831360, 2.818756, 2.807336, 2.796940, 2.787436, 2.778715, 2.770683,
        2.763262, 2.756386, 2.749996,
    ]),
];

/// `t` with `P(T ≤ t) = confidence` for `df` degrees of freedom.
pub fn t_quantile(confidence: f64, df: usize) -> Result<f64> {
    let row = T_TABLE
        .iter()
        .find(|(c, _)| (c - confidence).abs() < 1e-12)
        .ok_or_else(|| {
            Error::Domain(format!(
                "no t table for confidence {confidence} (have 0.90, 0.95, 0.975, 0.99, 0.995)"
            ))
        })?;
    if !(1..=30).contains(&df) {
        return Err(Error::Domain(format!("t table covers df 1..=30, got {df}")));
    }
    Ok(row.1[df - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubgroupSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub t: f64,
    pub lcl: f64,
}

/// One-sided lower confidence limit `mean − t·s/√k` of `k ≥ 2` rates.
pub fn subgroup_lcl(rates: &[f64], confidence: f64) -> Result<f64> {
    subgroup_summary(rates, confidence).map(|s| s.lcl)
}

pub fn subgroup_summary(rates: &[f64], confidence: f64) -> Result<SubgroupSummary> {
    let k = rates.len();
    if k < 2 {
        return Err(Error::Domain(format!("a confidence limit needs at least 2 rates, got {k}")));
    }
    let t = t_quantile(confidence, k - 1)?;
    let mean = rates.iter().sum::<f64>() / k as f64;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    let std_dev = var.sqrt();
    Ok(SubgroupSummary {
        mean,
        std_dev,
        t,
        lcl: mean - t * std_dev / (k as f64).sqrt(),
    })
}

fn require_prefixed(census: &PatternCensus) -> Result<()> {
    if census.length() < 2 {
        return Err(Error::Domain("the ideal predictor needs strings of length ≥ 2".into()));
    }
    Ok(())
}

/// Σ over prefixes of the larger successor count.
pub fn ideal_correct_count(census: &PatternCensus) -> Result<u64> {
    require_prefixed(census)?;
    Ok((0..1usize << (census.length() - 1))
        .map(|p| {
            let (c0, c1) = census.successor_counts(p);
            c0.max(c1)
        })
        .sum())
}

/// In-sample rate of the per-prefix majority predictor.
pub fn ideal_predictor_rate(census: &PatternCensus) -> Result<f64> {
    Ok(ideal_correct_count(census)? as f64 / census.windows() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorityLabel {
    /// The more frequent successor; ties go to 1.
    pub label: u8,
    pub count0: u64,
    pub count1: u64,
}

/// Majority successor of `prefix`, a `length − 1`-bit value.
pub fn majority_label(census: &PatternCensus, prefix: usize) -> Result<MajorityLabel> {
    require_prefixed(census)?;
    if prefix >= 1 << (census.length() - 1) {
        return Err(Error::Domain(format!(
            "prefix {prefix} does not fit in {} bits",
            census.length() - 1
        )));
    }
    let (count0, count1) = census.successor_counts(prefix);
    Ok(MajorityLabel {
        label: u8::from(count1 >= count0),
        count0,
        count1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: usize,
    pub b: u32,
    #[serde(rename = "W")]
    pub windows: u64,
    pub k: f64,
    pub statistic: f64,
    pub bound: f64,
    pub violated: bool,
    pub counts: Vec<u64>,
    pub frequencies: Vec<f64>,
}

/// Right side of the normality inequality: `1/b + k·√(b−1)/(b·√W)`.
pub fn normality_bound(b: u32, windows: u64, k: f64) -> f64 {
    1.0 / b as f64 + k * null_sigma(b, windows)
}

/// Ideal-predictor rate against the `k`σ chance bound, both over the `W`
/// windows of the census.
pub fn normality_test(census: &PatternCensus, k: f64) -> Result<NormalityReport> {
    let statistic = ideal_predictor_rate(census)?;
    let windows = census.windows();
    let bound = normality_bound(BINARY, windows, k);
    Ok(NormalityReport {
        n: census.n(),
        length: census.length(),
        b: BINARY,
        windows,
        k,
        statistic,
        bound,
        violated: statistic > bound,
        counts: census.counts().to_vec(),
        frequencies: census.frequencies(),
    })
}

impl NormalityReport {
    /// `pattern,count,frequency` rows followed by a `summary` row carrying
    /// n, W, statistic, bound, k and the verdict.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "pattern,count,frequency")?;
        for (v, (c, f)) in self.counts.iter().zip(&self.frequencies).enumerate() {
            writeln!(out, "{},{},{}", pattern_string(v, self.length), c, f)?;
        }
        writeln!(
            out,
            "summary,n={} L={} W={} statistic={} bound={} k={} violated={},",
            self.n, self.length, self.windows, self.statistic, self.bound, self.k, self.violated
        )
    }

    /// Compact JSON fields: n, L, W, statistic, bound, k, violated.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "L": self.length,
            "W": self.windows,
            "statistic": self.statistic,
            "bound": self.bound,
            "k": self.k,
            "violated": self.violated,
        })
    }
}
