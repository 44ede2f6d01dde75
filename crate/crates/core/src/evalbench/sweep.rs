use std::fmt::Write as _;
use std::io::Write;
use std::time::{Duration, Instant};

use super::models::{ExperimentConfig, ModelSpec};
use super::trials::{run_trials, TrialSet};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub const SWEEP_CSV_HEADER: &str =
    "model,trials,mean_test_rmse,std_test_rmse,mean_train_rmse,failures,wall_time_seconds";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub model: ModelSpec,
    pub trials: usize,
    pub mean_test_rmse: f64,
    pub std_test_rmse: f64,
    pub mean_train_rmse: f64,
    pub failures: usize,
    pub wall_time: Duration,
    /// Elapsed sweep time when this row finished.
    pub cumulative_wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub n_train: usize,
    pub n_test: usize,
    pub seeds: Vec<u64>,
    pub rows: Vec<SweepRow>,
    pub trial_sets: Vec<TrialSet>,
}

/// Runs every config over the same seeds, rows in request order.
pub fn sweep(
    d: &Dataset,
    configs: &[ModelSpec],
    cfg: &ExperimentConfig,
    seeds: &[u64],
    n_test: usize,
) -> Result<SweepReport> {
    if configs.is_empty() {
        return Err(Error::NoConfigs);
    }
    let started = Instant::now();
    let mut rows = Vec::with_capacity(configs.len());
    let mut trial_sets = Vec::with_capacity(configs.len());
    for &spec in configs {
        let set = run_trials(d, spec, cfg, seeds, n_test)?;
        let a = &set.aggregate;
        rows.push(SweepRow {
            model: spec,
            trials: a.trials,
            mean_test_rmse: a.mean_test_rmse,
            std_test_rmse: a.std_test_rmse,
            mean_train_rmse: a.mean_train_rmse,
            failures: a.failures,
            wall_time: a.wall_time,
            cumulative_wall_time: started.elapsed(),
        });
        trial_sets.push(set);
    }
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    Ok(SweepReport {
        n_train: d.len() - n_test,
        n_test,
        seeds,
        rows,
        trial_sets,
    })
}

impl SweepReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SWEEP_CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.model,
                r.trials,
                r.mean_test_rmse,
                r.std_test_rmse,
                r.mean_train_rmse,
                r.failures,
                r.wall_time.as_secs_f64()
            )?;
        }
        w.flush()
    }

    /// Console table with the columns: model, trained, tested, RMS error, running time.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<16} {:>15} {:>14} {:>10} {:>14}",
            "ANN model", "Trained samples", "Tested samples", "RMS error", "Running time"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<16} {:>15} {:>14} {:>10.4} {:>14}",
                r.model.label(),
                self.n_train,
                self.n_test,
                r.mean_test_rmse,
                format_duration(r.wall_time)
            );
        }
        out
    }
}

/// `H:MM:SS.ss`
pub fn format_duration(d: Duration) -> String {
    let total = d.as_secs_f64();
    let hours = (total / 3600.0).floor();
    let minutes = ((total - hours * 3600.0) / 60.0).floor();
    let seconds = total - hours * 3600.0 - minutes * 60.0;
    format!("{}:{:02}:{:05.2}", hours as u64, minutes as u64, seconds)
}
