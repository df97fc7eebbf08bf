//! Experiment C from existing digit caches (create them first with
//! `pseudodice gen-digits`), with the MT19937 control.
//!
//! ```text
//! cargo run --release --example experiment_c -- /tmp/digits /tmp/report-c
//! ```

use pseudodice::harness::{emit_report, run_experiment, ExperimentConfig, ExperimentId, ExperimentResult, ReportFormat};

fn main() -> pseudodice::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut config = ExperimentConfig::defaults(ExperimentId::C);
    config.digit_cache_dir = args.next().unwrap_or_else(|| "digits".into()).into();
    let out = args.next().unwrap_or_else(|| "report-c".into());

    let run = run_experiment(&config)?;
    let ExperimentResult::C(c) = &run.report.result else { unreachable!() };
    for s in &c.sources {
        for r in &s.rows {
            println!(
                "{:<6} n={:<8} statistic {:.6} bound {:.6} violated {:<5} max |f − 1/128| {:.2e} (band {:.2e})",
                s.label, r.n, r.normality.statistic, r.normality.bound, r.normality.violated,
                r.max_frequency_deviation, r.frequency_band
            );
        }
    }
    let files = emit_report(&run, &out, &[ReportFormat::Json, ReportFormat::Csv])?;
    println!("wrote {} files to {out}", files.len());
    Ok(())
}
