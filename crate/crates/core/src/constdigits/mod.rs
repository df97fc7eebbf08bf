//! Decimal digit streams of π, e and √2.
//!
//! Every stream holds fractional-part digits only, 1-indexed in external
//! interfaces: digit 1 of π is the `1` in `3.14159…`.
//!
//! Two independent generators are provided. [`gen_digits`] is the fast path
//! (binary splitting, Newton square root) used to build the large caches;
//! [`gen_digits_alt`] is a slow verification oracle built on unrelated series.

mod alt;
mod file;
mod series;

use std::fmt;
use std::str::FromStr;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use file::{load_digit_file, save_digit_file};

/// Default upper bound on a single [`gen_digits`] request.
pub const DEFAULT_MAX_DIGITS: usize = 20_000_000;

/// Upper bound on [`gen_digits_alt`] requests.
pub const ALT_MAX_DIGITS: usize = 1_000_000;

/// Number of trailing requested digits that must agree between guard levels.
const GUARD_CHECK_DIGITS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constant {
    Pi,
    E,
    Sqrt2,
}

impl Constant {
    pub const ALL: [Constant; 3] = [Constant::Pi, Constant::E, Constant::Sqrt2];

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
            Constant::Sqrt2 => "sqrt2",
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Constant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(Constant::Pi),
            "e" => Ok(Constant::E),
            "sqrt2" => Ok(Constant::Sqrt2),
            other => Err(Error::Config(format!(
                "unknown constant `{other}` (expected pi, e or sqrt2)"
            ))),
        }
    }
}

/// Fractional-part decimal digits of a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitStream {
    constant: Constant,
    digits: Vec<u8>,
}

impl DigitStream {
    pub const CONVENTION: &'static str = "fractional";

    /// Builds a stream, rejecting any value outside `0..=9`.
    pub fn new(constant: Constant, digits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = digits.iter().position(|&d| d > 9) {
            return Err(Error::Domain(format!(
                "digit {} at position {} is not a decimal digit",
                digits[pos],
                pos + 1
            )));
        }
        Ok(DigitStream { constant, digits })
    }

    pub fn constant(&self) -> Constant {
        self.constant
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn count(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The first `m` digits, or a bounds error if the stream is shorter.
    pub fn prefix(&self, m: usize) -> Result<DigitStream> {
        if m > self.digits.len() {
            return Err(Error::Bounds(format!(
                "prefix of {m} digits requested from a {}-digit {} stream",
                self.digits.len(),
                self.constant
            )));
        }
        Ok(DigitStream {
            constant: self.constant,
            digits: self.digits[..m].to_vec(),
        })
    }
}

/// `n` fractional digits of `constant` from the primary algorithms, capped at
/// [`DEFAULT_MAX_DIGITS`].
pub fn gen_digits(constant: Constant, n: usize) -> Result<DigitStream> {
    gen_digits_capped(constant, n, DEFAULT_MAX_DIGITS)
}

/// As [`gen_digits`] with an explicit capacity.
///
/// The value is computed with `⌈n/10⌉ + 10` guard digits and again with twice
/// that guard; if the last few requested digits differ between the two
/// levels, the guard keeps doubling until two consecutive levels agree.
pub fn gen_digits_capped(constant: Constant, n: usize, max: usize) -> Result<DigitStream> {
    if n > max {
        return Err(Error::Capacity {
            what: format!("{constant} digit generation"),
            required: n,
            available: max,
        });
    }
    if n == 0 {
        return Ok(DigitStream {
            constant,
            digits: Vec::new(),
        });
    }

    let mut guard = n.div_ceil(10) + 10;
    let mut previous = fractional_digits(&series::scaled(constant, n + guard), n + guard);
    loop {
        guard *= 2;
        let current = fractional_digits(&series::scaled(constant, n + guard), n + guard);
        let tail = n.saturating_sub(GUARD_CHECK_DIGITS);
        if previous[tail..n] == current[tail..n] {
            let mut digits = current;
            digits.truncate(n);
            return Ok(DigitStream { constant, digits });
        }
        log::warn!("{constant}: trailing digits unstable at guard {guard}, doubling");
        previous = current;
    }
}

/// `n` fractional digits of `constant` from the verification algorithms
/// (Machin arctangents, direct factorial summation, long-hand square root).
pub fn gen_digits_alt(constant: Constant, n: usize) -> Result<DigitStream> {
    if n > ALT_MAX_DIGITS {
        return Err(Error::Capacity {
            what: format!("{constant} alternate digit generation"),
            required: n,
            available: ALT_MAX_DIGITS,
        });
    }
    if n == 0 {
        return Ok(DigitStream {
            constant,
            digits: Vec::new(),
        });
    }
    let digits = match constant {
        Constant::Pi => {
            let guard = alt_guard(n);
            let mut d = fractional_digits(&alt::pi_machin(n + guard), n + guard);
            d.truncate(n);
            d
        }
        Constant::E => {
            let guard = alt_guard(n);
            let mut d = fractional_digits(&alt::e_direct_sum(n + guard), n + guard);
            d.truncate(n);
            d
        }
        // Digit-by-digit extraction is exact; no guard needed.
        Constant::Sqrt2 => alt::sqrt2_long_hand(n),
    };
    Ok(DigitStream { constant, digits })
}

fn alt_guard(n: usize) -> usize {
    // Each truncated term loses < 1 ulp; the term count is O(n).
    12 + n.to_string().len()
}

/// Splits `floor(x · 10^d)` for a constant with a one-digit integer part into
/// its `d` fractional digits.
fn fractional_digits(scaled: &Integer, d: usize) -> Vec<u8> {
    let s = scaled.to_string_radix(10);
    debug_assert_eq!(s.len(), d + 1, "constant must have exactly one integer digit");
    s.as_bytes()[1..].iter().map(|&c| c - b'0').collect()
}
