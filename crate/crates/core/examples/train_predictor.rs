//! Train the 6-30-20-1 network on a window set from a constant, compare it
//! with the ideal predictor, and score a held-out block.
//!
//! ```text
//! cargo run --release --example train_predictor -- e 40000 7
//! ```

use pseudodice::bitseq::{binarize_digits, make_windows, pattern_census, DigitThreshold};
use pseudodice::constdigits::{gen_digits, Constant};
use pseudodice::mlp::{accuracy, init_model, train, MlpModel, TrainConfig, DEFAULT_LAYERS};
use pseudodice::stats::{ideal_predictor_rate, sigma_level, BINARY};

fn main() -> pseudodice::Result<()> {
    let mut args = std::env::args().skip(1);
    let constant: Constant = args.next().as_deref().unwrap_or("pi").parse()?;
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(40_000);
    let seed: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let held_out = 200_000;
    let bits = binarize_digits(&gen_digits(constant, count + held_out + 6)?, DigitThreshold::default());
    let train_set = make_windows(&bits, 1, count, 6)?;
    let test_set = make_windows(&bits, count + 1, held_out, 6)?;

    let config = TrainConfig { init_seed: seed, ..TrainConfig::default() };
    let model = init_model(&DEFAULT_LAYERS, config.init_seed)?;
    let (model, log) = train(&model, &train_set.batch(), &config)?;
    for (i, e) in log.epochs.iter().enumerate().filter(|(i, _)| i % 20 == 0 || *i + 1 == log.epochs.len()) {
        println!("epoch {:>3}: loss {:.6} |grad| {:.3e}", i + 1, e.loss, e.gradient_norm);
    }
    println!("stopped: {:?}", log.stop_reason);

    let census = pattern_census(&bits, count + 6, 7)?;
    let train_acc = accuracy(&model, &train_set.batch())?;
    let test_acc = accuracy(&model, &test_set.batch())?;
    println!("train {train_acc:.5} (ideal predictor {:.5})", ideal_predictor_rate(&census)?);
    println!(
        "held-out {test_acc:.5} over {held_out}, {:+.2}σ",
        sigma_level(test_acc, held_out as u64, BINARY)
    );

    let text = model.to_text();
    assert_eq!(MlpModel::from_text(&text)?, model);
    println!("model text form: {} lines, round-trips exactly", text.lines().count());
    Ok(())
}
