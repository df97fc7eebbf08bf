//! Pattern census of a binarized constant: the most and least frequent
//! 7-bit strings and the successor counts of one prefix.
//!
//! ```text
//! cargo run --release --example census -- sqrt2 1000000
//! ```

use pseudodice::bitseq::{binarize_digits, pattern_census, pattern_string, DigitThreshold};
use pseudodice::constdigits::{gen_digits, Constant};
use pseudodice::stats::majority_label;

fn main() -> pseudodice::Result<()> {
    let mut args = std::env::args().skip(1);
    let constant: Constant = args.next().as_deref().unwrap_or("pi").parse()?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);

    let bits = binarize_digits(&gen_digits(constant, n)?, DigitThreshold::default());
    let census = pattern_census(&bits, n, 7)?;
    let mut ranked: Vec<(usize, u64)> = census.counts().iter().copied().enumerate().collect();
    ranked.sort_by_key(|&(v, c)| (std::cmp::Reverse(c), v));

    println!("{} windows of 7 bits from {}", census.windows(), bits.source());
    println!("expected per string: {:.1}", census.windows() as f64 / 128.0);
    for (v, c) in ranked.iter().take(3) {
        println!("  most   {} {c}", pattern_string(*v, 7));
    }
    for (v, c) in ranked.iter().rev().take(3) {
        println!("  least  {} {c}", pattern_string(*v, 7));
    }
    let m = majority_label(&census, 0b011000)?;
    println!("011000-0: {}, 011000-1: {}, majority {}", m.count0, m.count1, m.label);
    Ok(())
}
