//! Experiment A end to end: digit cache, training, two test sets, subgroup
//! LCL, and the report files.
//!
//! ```text
//! cargo run --release --example experiment_a -- e /tmp/digits /tmp/report-a
//! ```

use pseudodice::harness::{emit_report, run_experiment, ExperimentConfig, ExperimentId, ExperimentResult, ReportFormat};

fn main() -> pseudodice::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut config = ExperimentConfig::defaults(ExperimentId::A);
    config.constant = args.next().as_deref().unwrap_or("pi").parse()?;
    config.digit_cache_dir = args.next().unwrap_or_else(|| "digits".into()).into();
    let out = args.next().unwrap_or_else(|| "report-a".into());

    let run = run_experiment(&config)?;
    let ExperimentResult::A(a) = &run.report.result else { unreachable!() };
    for d in std::iter::once(&a.train).chain(&a.tests) {
        println!(
            "{:<5} {:>9} instances from {:<7} accuracy {:.6} ({:+.2}σ)",
            d.name, d.count, d.start, d.accuracy, d.sigma_level
        );
    }
    println!("ideal predictor on the training windows: {:.6}", a.ideal.rate);
    let s = &a.subgroups;
    println!("{} subgroups of {}: LCL {:.6} (> 0.5: {})", s.rates.len(), s.block_size, s.lcl, s.lcl_above_half);
    for path in emit_report(&run, &out, &[ReportFormat::Json, ReportFormat::Csv])? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
