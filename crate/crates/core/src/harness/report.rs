use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{
    DatasetResult, ExperimentAResult, ExperimentBResult, ExperimentCResult, ExperimentReport, ExperimentResult,
    ExperimentRun,
};
use crate::bitseq::pattern_string;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Config(format!("unknown report format `{s}`"))),
        }
    }
}

struct Checker(Vec<String>);

impl Checker {
    fn finite(&mut self, what: &str, v: f64) {
        if !v.is_finite() {
            self.0.push(format!("{what} = {v}"));
        }
    }

    fn rate(&mut self, what: &str, v: f64) {
        if !(0.0..=1.0).contains(&v) {
            self.0.push(format!("{what} = {v} is not a rate"));
        }
    }

    fn dataset(&mut self, d: &DatasetResult) {
        self.rate(&format!("{} accuracy", d.name), d.accuracy);
        self.finite(&format!("{} sigma_level", d.name), d.sigma_level);
    }
}

impl ExperimentReport {
    /// Every float finite, every rate in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        let mut c = Checker(Vec::new());
        match &self.result {
            ExperimentResult::A(a) => check_a(&mut c, a),
            ExperimentResult::B(b) => check_b(&mut c, b),
            ExperimentResult::C(r) => check_c(&mut c, r),
        }
        if c.0.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(c.0.join("; ")))
        }
    }
}

fn check_a(c: &mut Checker, a: &ExperimentAResult) {
    c.dataset(&a.train);
    a.tests.iter().for_each(|d| c.dataset(d));
    c.rate("ideal rate", a.ideal.rate);
    for (i, l) in a.training.losses.iter().enumerate() {
        c.finite(&format!("loss[{i}]"), *l);
    }
    c.finite("final gradient norm", a.training.final_gradient_norm);
    let s = &a.subgroups;
    for (i, r) in s.rates.iter().enumerate() {
        c.rate(&format!("subgroup rate[{i}]"), *r);
    }
    c.rate("subgroup mean", s.mean);
    c.finite("subgroup std_dev", s.std_dev);
    c.finite("subgroup t", s.t);
    c.finite("subgroup lcl", s.lcl);
}

fn check_b(c: &mut Checker, b: &ExperimentBResult) {
    c.rate("yardstick", b.yardstick);
    for s in &b.seeds {
        c.rate(&format!("seed {} ideal rate", s.seed), s.ideal_rate);
        c.rate(&format!("seed {} fraction above yardstick", s.seed), s.fraction_above_yardstick);
        for t in &s.trials {
            let what = format!("seed {} trial {}", s.seed, t.trial);
            c.rate(&format!("{what} train accuracy"), t.train_accuracy);
            c.finite(&format!("{what} loss"), t.final_loss);
            c.rate(&format!("{what} output"), t.output);
        }
    }
}

fn check_c(c: &mut Checker, r: &ExperimentCResult) {
    c.finite("k", r.k);
    for s in &r.sources {
        for row in &s.rows {
            let what = format!("{} n={}", s.label, row.n);
            c.rate(&format!("{what} ones frequency"), row.ones_frequency);
            c.rate(&format!("{what} statistic"), row.normality.statistic);
            c.finite(&format!("{what} bound"), row.normality.bound);
            c.finite(&format!("{what} band"), row.frequency_band);
            c.finite(&format!("{what} deviation"), row.max_frequency_deviation);
            for (i, f) in row.normality.frequencies.iter().enumerate() {
                c.rate(&format!("{what} frequency[{i}]"), *f);
            }
            if let Some(alt) = &row.alt_convention {
                c.rate(&format!("{what} alternate statistic"), alt.statistic);
            }
        }
    }
}

/// Writes `experiment_<id>.json` plus `experiment_<id>.metadata.json` and/or
/// the flat CSV tables into `dir`. Returns the files written.
pub fn emit_report(run: &ExperimentRun, dir: impl AsRef<Path>, formats: &[ReportFormat]) -> Result<Vec<PathBuf>> {
    let report = &run.report;
    report.validate()?;
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let stem = format!("experiment_{}", report.experiment);
    let mut written = Vec::new();

    if formats.contains(&ReportFormat::Json) {
        let path = dir.join(format!("{stem}.json"));
        write_json(&path, report)?;
        written.push(path);
        let path = dir.join(format!("{stem}.metadata.json"));
        write_json(&path, &run.metadata)?;
        written.push(path);
    }
    if formats.contains(&ReportFormat::Csv) {
        match &report.result {
            ExperimentResult::A(a) => csv_a(a, dir, &stem, &mut written)?,
            ExperimentResult::B(b) => csv_b(b, dir, &stem, &mut written)?,
            ExperimentResult::C(c) => csv_c(c, dir, &stem, &mut written)?,
        }
    }
    Ok(written)
}

pub fn read_report(path: impl AsRef<Path>) -> Result<ExperimentReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format(0, format!("{}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Validation(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_table(
    dir: &Path,
    name: String,
    written: &mut Vec<PathBuf>,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut out = BufWriter::new(file);
    body(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(())
}

fn csv_a(a: &ExperimentAResult, dir: &Path, stem: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    write_table(dir, format!("{stem}_datasets.csv"), written, |out| {
        writeln!(out, "dataset,start,count,correct,accuracy,sigma_level,exceeds_3sigma,exceeds_5sigma")?;
        for d in std::iter::once(&a.train).chain(&a.tests) {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                d.name, d.start, d.count, d.correct, d.accuracy, d.sigma_level, d.exceeds_3sigma, d.exceeds_5sigma
            )?;
        }
        Ok(())
    })?;
    let s = &a.subgroups;
    write_table(dir, format!("{stem}_subgroups.csv"), written, |out| {
        writeln!(out, "subgroup,size,correct,rate")?;
        for (i, (c, r)) in s.correct.iter().zip(&s.rates).enumerate() {
            writeln!(out, "{},{},{},{}", i + 1, s.block_size, c, r)?;
        }
        Ok(())
    })
}

fn csv_b(b: &ExperimentBResult, dir: &Path, stem: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    write_table(dir, format!("{stem}_seeds.csv"), written, |out| {
        writeln!(
            out,
            "seed,success_count,trials,test_input,test_label,count0,count1,majority_label,matches_majority,explained,fraction_above_yardstick"
        )?;
        for s in &b.seeds {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                s.seed,
                s.success_count,
                s.trials.len(),
                s.test_input,
                s.test_label,
                s.majority.count0,
                s.majority.count1,
                s.majority.label,
                s.test_matches_majority,
                s.explained,
                s.fraction_above_yardstick
            )?;
        }
        Ok(())
    })?;
    write_table(dir, format!("{stem}_trials.csv"), written, |out| {
        writeln!(out, "seed,trial,init_seed,train_accuracy,final_loss,epochs,output,prediction,correct")?;
        for s in &b.seeds {
            for t in &s.trials {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    s.seed, t.trial, t.init_seed, t.train_accuracy, t.final_loss, t.epochs, t.output, t.prediction, t.correct
                )?;
            }
        }
        Ok(())
    })
}

fn csv_c(r: &ExperimentCResult, dir: &Path, stem: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    write_table(dir, format!("{stem}_grid.csv"), written, |out| {
        writeln!(
            out,
            "source,n,L,W,k,statistic,bound,violated,alt_statistic,alt_violated,ones_frequency,max_frequency_deviation,frequency_band"
        )?;
        for s in &r.sources {
            for row in &s.rows {
                let q = &row.normality;
                let (alt_s, alt_v) = match &row.alt_convention {
                    Some(a) => (a.statistic.to_string(), a.violated.to_string()),
                    None => (String::new(), String::new()),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    s.label,
                    row.n,
                    q.length,
                    q.windows,
                    q.k,
                    q.statistic,
                    q.bound,
                    q.violated,
                    alt_s,
                    alt_v,
                    row.ones_frequency,
                    row.max_frequency_deviation,
                    row.frequency_band
                )?;
            }
        }
        Ok(())
    })?;
    for s in &r.sources {
        for row in &s.rows {
            let q = &row.normality;
            write_table(dir, format!("{stem}_{}_n{}.csv", s.label, row.n), written, |out| {
                writeln!(out, "pattern,count,frequency")?;
                for (v, (c, f)) in q.counts.iter().zip(&q.frequencies).enumerate() {
                    writeln!(out, "{},{},{}", pattern_string(v, q.length), c, f)?;
                }
                Ok(())
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_experiment, ExperimentConfig, ExperimentId, WindowRange};

    fn small_b() -> ExperimentConfig {
        let mut c = ExperimentConfig::defaults(ExperimentId::B);
        c.train_range = WindowRange::new(1, 1_000);
        c.trials = 3;
        c.mt_seeds = vec![5];
        c.train.max_epochs = 10;
        c
    }

    #[test]
    fn json_round_trip_and_csv_rows() {
        let dir = tempfile::tempdir().unwrap();
        let run = run_experiment(&small_b()).unwrap();
        let files = emit_report(&run, dir.path(), &[ReportFormat::Json, ReportFormat::Csv]).unwrap();
        assert_eq!(files.len(), 4);
        let back = read_report(dir.path().join("experiment_b.json")).unwrap();
        assert_eq!(back, run.report);
        let trials = std::fs::read_to_string(dir.path().join("experiment_b_trials.csv")).unwrap();
        assert_eq!(trials.lines().count(), 4);
    }

    #[test]
    fn nan_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let mut run = run_experiment(&small_b()).unwrap();
        let ExperimentResult::B(b) = &mut run.report.result else { panic!() };
        b.seeds[0].trials[0].final_loss = f64::NAN;
        match emit_report(&run, dir.path(), &[ReportFormat::Json]) {
            Err(Error::Validation(msg)) => assert!(msg.contains("loss"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(!dir.path().join("experiment_b.json").exists());
    }

    #[test]
    fn out_of_range_rate_is_refused() {
        let mut run = run_experiment(&small_b()).unwrap();
        let ExperimentResult::B(b) = &mut run.report.result else { panic!() };
        b.seeds[0].trials[0].train_accuracy = 1.5;
        assert!(matches!(run.report.validate(), Err(Error::Validation(_))));
    }
}
