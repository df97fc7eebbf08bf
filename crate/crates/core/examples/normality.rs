//! Ideal-predictor normality test over a grid of prefix lengths, for a
//! constant and for an MT19937 sequence of the same length.
//!
//! ```text
//! cargo run --release --example normality -- pi 10000,100000,1000000
//! ```

use pseudodice::bitseq::{binarize_digits, pattern_census, BitSequence, DigitThreshold};
use pseudodice::constdigits::{gen_digits, Constant};
use pseudodice::mtprng::mt_binary_sequence;
use pseudodice::stats::normality_test;

fn grid(bits: &BitSequence, ns: &[usize]) -> pseudodice::Result<()> {
    println!("{}", bits.source());
    for &n in ns {
        let r = normality_test(&pattern_census(bits, n, 7)?, 5.0)?;
        println!(
            "  n={n:<9} W={:<9} statistic {:.6}  bound {:.6}  {}",
            r.windows,
            r.statistic,
            r.bound,
            if r.violated { "violated" } else { "within" }
        );
    }
    Ok(())
}

fn main() -> pseudodice::Result<()> {
    let mut args = std::env::args().skip(1);
    let constant: Constant = args.next().as_deref().unwrap_or("pi").parse()?;
    let ns: Vec<usize> = args
        .next()
        .unwrap_or_else(|| "10000,100000,1000000".into())
        .split(',')
        .map(|s| s.parse().expect("n-grid of integers"))
        .collect();
    let n_max = *ns.iter().max().unwrap();

    let digits = gen_digits(constant, n_max)?;
    grid(&binarize_digits(&digits, DigitThreshold::inclusive(5)), &ns)?;
    grid(&binarize_digits(&digits, DigitThreshold::exclusive(5)), &ns)?;
    grid(&mt_binary_sequence(1, n_max, 0.5), &ns)
}
