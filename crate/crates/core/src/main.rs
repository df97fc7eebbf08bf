use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pseudodice::bitseq::{binarize_digits, load_bit_file, pattern_census, save_bit_file, DigitThreshold};
use pseudodice::constdigits::{gen_digits, gen_digits_alt, load_digit_file, save_digit_file, Constant};
use pseudodice::harness::{emit_report, run_experiment, ExperimentConfig, ExperimentId, ReportFormat};
use pseudodice::mtprng::mt_binary_sequence;
use pseudodice::stats::normality_test;
use pseudodice::{Error, Result};

/// Digit-cache, census and experiment tooling for next-bit predictability.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute fractional digits of a constant into a digit file.
    GenDigits {
        #[arg(long)]
        constant: Constant,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
        /// Compare the first min(count, 100000) digits with the alternate algorithm.
        #[arg(long)]
        verify: bool,
    },
    /// Turn a digit file into a bit file.
    Binarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        threshold: u8,
        /// `digit ≥ threshold` when true, `digit > threshold` when false.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        digit_threshold_inclusive: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count every length-L string among the first n bits.
    Census {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        length: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ideal-predictor normality test over several prefix lengths.
    Normality {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "10000,100000,1000000,9000000")]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 7)]
        length: usize,
        #[arg(long, default_value_t = 5.0)]
        k: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run experiment a, b or c.
    Experiment {
        experiment: ExperimentId,
        /// Flat key = value file; defaults apply to absent keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "json,csv")]
        format: Vec<ReportFormat>,
    },
    /// Write an MT19937 bit file (bit = real ≥ threshold).
    Mt {
        #[arg(long)]
        seed: u32,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::GenDigits {
            constant,
            count,
            out,
            verify,
        } => {
            let stream = gen_digits(constant, count)?;
            if verify {
                let m = count.min(100_000);
                let alt = gen_digits_alt(constant, m)?;
                if let Some(i) = alt.digits().iter().zip(stream.digits()).position(|(a, b)| a != b) {
                    return Err(Error::Validation(format!(
                        "{constant}: algorithms disagree at fractional digit {}",
                        i + 1
                    )));
                }
                log::info!("{constant}: first {m} digits verified against the alternate algorithm");
            }
            save_digit_file(&stream, &out)?;
            log::info!("wrote {count} digits of {constant} to {}", out.display());
        }
        Command::Binarize {
            input,
            threshold,
            digit_threshold_inclusive,
            out,
        } => {
            if threshold > 9 {
                return Err(Error::Config(format!("threshold {threshold} is not a digit")));
            }
            let stream = load_digit_file(&input)?;
            let rule = DigitThreshold {
                value: threshold,
                inclusive: digit_threshold_inclusive,
            };
            save_bit_file(&binarize_digits(&stream, rule), &out)?;
        }
        Command::Census { input, n, length, out } => {
            let bits = load_bit_file(&input)?;
            let census = pattern_census(&bits, n, length)?;
            let file = std::fs::File::create(&out).map_err(|e| io(&out, e))?;
            census
                .write_csv(std::io::BufWriter::new(file))
                .map_err(|e| io(&out, e))?;
        }
        Command::Normality {
            input,
            n_grid,
            length,
            k,
            out,
        } => {
            let bits = load_bit_file(&input)?;
            let reports = n_grid
                .iter()
                .map(|&n| Ok(normality_test(&pattern_census(&bits, n, length)?, k)?.summary_json()))
                .collect::<Result<Vec<_>>>()?;
            let json = serde_json::json!({ "source": bits.source().to_string(), "reports": reports });
            let text = serde_json::to_string_pretty(&json).expect("json values serialize") + "\n";
            std::fs::write(&out, text).map_err(|e| io(&out, e))?;
        }
        Command::Experiment {
            experiment,
            config,
            out,
            format,
        } => {
            let config = match config {
                Some(path) => ExperimentConfig::load(experiment, path)?,
                None => ExperimentConfig::defaults(experiment),
            };
            let out = out
                .or_else(|| config.out_dir.clone())
                .ok_or_else(|| Error::Config("no output directory: pass --out or set out_dir".into()))?;
            let run = run_experiment(&config)?;
            for path in emit_report(&run, &out, &format)? {
                log::info!("wrote {}", path.display());
            }
        }
        Command::Mt {
            seed,
            count,
            threshold,
            out,
        } => save_bit_file(&mt_binary_sequence(seed, count, threshold), &out)?,
    }
    Ok(())
}

fn io(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}
