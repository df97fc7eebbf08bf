//! Many independently initialised networks per MT19937 sequence, each
//! predicting one held-out bit, next to the census of that bit's prefix.
//! A sequence with an injected bias after `011000` shows the mechanism
//! working.
//!
//! ```text
//! cargo run --release --example experiment_b -- 100
//! ```

use pseudodice::harness::{
    conditional_bias_sequence, run_experiment, run_experiment_b_on, ExperimentConfig, ExperimentId,
    ExperimentResult, SeedResult,
};

fn row(s: &SeedResult) {
    println!(
        "{:>6} {:>8}/{:<3} test {}-{}  census {:>3}/{:<3} majority {}  {}",
        s.seed,
        s.success_count,
        s.trials.len(),
        s.test_input,
        s.test_label,
        s.majority.count0,
        s.majority.count1,
        s.majority.label,
        if s.explained { "explained" } else { "unexplained" }
    );
}

fn main() -> pseudodice::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let mut config = ExperimentConfig::defaults(ExperimentId::B);
    config.trials = trials;

    let run = run_experiment(&config)?;
    let ExperimentResult::B(b) = &run.report.result else { unreachable!() };
    println!("  seed  success       test        0/1 counts");
    b.seeds.iter().for_each(row);
    println!("explained {} of {} in {:.1}s", b.explained_seeds, b.seeds.len(), run.metadata.wall_clock_seconds);

    let start = config.b_test_start();
    let forced: Vec<(usize, u8)> = [0, 1, 1, 0, 0, 0, 1].iter().enumerate().map(|(i, &b)| (start + i, b)).collect();
    let bits = conditional_bias_sequence(1, config.b_sequence_len(), 0b011000, 6, 0.7, &forced)?;
    println!("with P(1|011000) = 0.7:");
    row(&run_experiment_b_on(&bits, 1, &config)?);
    Ok(())
}
