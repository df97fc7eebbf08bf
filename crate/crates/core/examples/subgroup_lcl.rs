//! σ verdicts and the one-sided lower confidence limit of subgroup rates.
//!
//! ```text
//! cargo run --example subgroup_lcl
//! ```

use pseudodice::stats::{sigma_exceeds, sigma_level, subgroup_summary, BINARY};

fn main() -> pseudodice::Result<()> {
    for (rate, k) in [(0.5132, 5.0), (0.5092, 3.0), (0.5092, 5.0)] {
        println!(
            "rate {rate} over 40000: {:+.2}σ, exceeds {k}σ: {}",
            sigma_level(rate, 40_000, BINARY),
            sigma_exceeds(rate, 40_000, BINARY, k)
        );
    }
    let groups = [
        ("e", [0.50079, 0.50075, 0.50003, 0.50130, 0.50164, 0.50255, 0.50163, 0.50098, 0.50086]),
        ("sqrt2", [0.50016, 0.50097, 0.50096, 0.49996, 0.49938, 0.50102, 0.50163, 0.50162, 0.50194]),
    ];
    for (name, rates) in groups {
        let s = subgroup_summary(&rates, 0.99)?;
        println!(
            "{name}: mean {:.6} sd {:.6} t {:.6} LCL(99%) {:.10}",
            s.mean, s.std_dev, s.t, s.lcl
        );
    }
    Ok(())
}
