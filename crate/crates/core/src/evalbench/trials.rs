use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::metrics::{rmse, sample_std};
use super::models::{fit_model, ExperimentConfig, FitNotes, FittedModel, ModelSpec};
use super::split::{split, SplitIndices};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numeric::mean;

/// Offset added to the seed when a diverged MLFN trial is retried.
pub const RETRY_SEED_OFFSET: u64 = 1000;

/// One row of a predicted-vs-actual table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRow {
    /// 1-based row number in the source dataset.
    pub sample: usize,
    pub actual: f64,
    pub predicted: f64,
    /// `actual - predicted`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub model: ModelSpec,
    /// Seed of the split.
    pub seed: u64,
    /// Seed actually used for weight initialisation (differs after a retry).
    pub init_seed: u64,
    pub train_rmse: f64,
    pub test_rmse: f64,
    pub wall_time: Duration,
    pub train_rows: Vec<DiagnosticRow>,
    pub test_rows: Vec<DiagnosticRow>,
    pub notes: FitNotes,
}

impl TrialResult {
    pub fn retried(&self) -> bool {
        self.init_seed != self.seed
    }
}

/// A trial together with the model it produced.
#[derive(Debug, Clone)]
pub struct Trial {
    pub model: FittedModel,
    pub split: SplitIndices,
    pub result: TrialResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub trials: usize,
    pub failures: usize,
    pub mean_test_rmse: f64,
    pub std_test_rmse: f64,
    pub mean_train_rmse: f64,
    pub wall_time: Duration,
}

/// Results of one model over several seeds. Results are ordered by seed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSet {
    pub model: ModelSpec,
    pub results: Vec<TrialResult>,
    pub failures: Vec<TrialFailure>,
    pub aggregate: Aggregate,
}

/// Predicts the given rows and pairs them with their targets.
pub fn evaluate(model: &FittedModel, d: &Dataset, indices: &[usize]) -> Vec<DiagnosticRow> {
    indices
        .iter()
        .map(|&i| {
            let s = &d.samples()[i];
            let predicted = model.predict_features(&s.features());
            DiagnosticRow {
                sample: i + 1,
                actual: s.target(),
                predicted,
                residual: s.target() - predicted,
            }
        })
        .collect()
}

pub fn rows_rmse(rows: &[DiagnosticRow]) -> Result<f64> {
    let p: Vec<f64> = rows.iter().map(|r| r.predicted).collect();
    let a: Vec<f64> = rows.iter().map(|r| r.actual).collect();
    rmse(&p, &a)
}

/// Fits `spec`, retrying a diverged MLFN once with `seed + RETRY_SEED_OFFSET`.
/// Returns the seed that produced the model.
pub fn fit_with_retry(
    spec: ModelSpec,
    train: &Dataset,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<(FittedModel, FitNotes, u64)> {
    match fit_model(spec, train, cfg, seed) {
        Ok((m, n)) => Ok((m, n, seed)),
        Err(Error::Divergence { .. }) if matches!(spec, ModelSpec::Mlfn { .. }) => {
            let retry_seed = seed.wrapping_add(RETRY_SEED_OFFSET);
            let (m, n) = fit_model(spec, train, cfg, retry_seed)?;
            Ok((m, n, retry_seed))
        }
        Err(e) => Err(e),
    }
}

/// Split with `seed`, fit on the training part, score both parts in raw units.
///
/// A diverged MLFN fit is retried with a new weight seed on the same split.
pub fn run_trial(
    d: &Dataset,
    spec: ModelSpec,
    cfg: &ExperimentConfig,
    seed: u64,
    n_test: usize,
) -> Result<Trial> {
    let started = Instant::now();
    let split = split(d, n_test, seed)?;
    let train = d.subset(&split.train)?;

    let (model, notes, init_seed) = fit_with_retry(spec, &train, cfg, seed)?;

    let train_rows = evaluate(&model, d, &split.train);
    let test_rows = evaluate(&model, d, &split.test);
    let result = TrialResult {
        model: spec,
        seed,
        init_seed,
        train_rmse: rows_rmse(&train_rows)?,
        test_rmse: rows_rmse(&test_rows)?,
        wall_time: started.elapsed(),
        train_rows,
        test_rows,
        notes,
    };
    Ok(Trial {
        model,
        split,
        result,
    })
}

/// Runs one trial per seed (in parallel) and aggregates them.
///
/// Trials that diverge twice are recorded as failures and left out of the
/// means; any other error aborts.
pub fn run_trials(
    d: &Dataset,
    spec: ModelSpec,
    cfg: &ExperimentConfig,
    seeds: &[u64],
    n_test: usize,
) -> Result<TrialSet> {
    if seeds.is_empty() {
        return Err(Error::EmptyInput);
    }
    let started = Instant::now();
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();

    let outcomes: Vec<(u64, Result<Trial>)> = seeds
        .par_iter()
        .map(|&seed| (seed, run_trial(d, spec, cfg, seed, n_test)))
        .collect();

    let mut results = Vec::new();
    let mut failures = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(trial) => results.push(trial.result),
            Err(e @ Error::Divergence { .. }) => failures.push(TrialFailure {
                seed,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    if results.is_empty() {
        return Err(Error::AllTrialsFailed(failures.len()));
    }
    let aggregate = aggregate(&results, failures.len(), started.elapsed());
    Ok(TrialSet {
        model: spec,
        results,
        failures,
        aggregate,
    })
}

pub fn aggregate(results: &[TrialResult], failures: usize, wall_time: Duration) -> Aggregate {
    let test: Vec<f64> = results.iter().map(|r| r.test_rmse).collect();
    let train: Vec<f64> = results.iter().map(|r| r.train_rmse).collect();
    Aggregate {
        trials: results.len(),
        failures,
        mean_test_rmse: mean(&test),
        std_test_rmse: sample_std(&test),
        mean_train_rmse: mean(&train),
        wall_time,
    }
}
