//! Print the default configuration of each experiment in the `key = value`
//! form `pseudodice experiment --config` reads, then parse an override.

use pseudodice::harness::{ExperimentConfig, ExperimentId};

fn main() -> pseudodice::Result<()> {
    for id in [ExperimentId::A, ExperimentId::B, ExperimentId::C] {
        println!("# experiment {id}");
        print!("{}", ExperimentConfig::defaults(id).to_text());
        println!();
    }
    let custom = ExperimentConfig::parse(ExperimentId::B, "mt_seeds = 3,4\ntrials = 10\nyardstick = 0.52\n")?;
    println!("custom B: seeds {:?}, {} trials, yardstick {}", custom.mt_seeds, custom.trials, custom.yardstick);
    match ExperimentConfig::parse(ExperimentId::B, "epochs = 10\n") {
        Err(e) => println!("rejected: {e} (exit code {})", e.exit_code()),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
