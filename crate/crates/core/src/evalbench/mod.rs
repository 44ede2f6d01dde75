//! Train/test splitting, metrics, the OLS baseline, repeated trials and
//! the hidden-node sweep.

pub mod diagnostics;
mod metrics;
mod models;
pub mod ols;
mod split;
mod sweep;
mod trials;

pub use diagnostics::{export_diagnostics, Partition, DIAGNOSTICS_CSV_HEADER};
pub use metrics::{rmse, sample_std};
pub use models::{fit_model, ExperimentConfig, FitNotes, FittedModel, MeanModel, ModelSpec};
pub use ols::OlsModel;
pub use split::{split, split_len, SplitIndices};
pub use sweep::{format_duration, sweep, SweepReport, SweepRow, SWEEP_CSV_HEADER};
pub use trials::{
    aggregate, evaluate, fit_with_retry, rows_rmse, run_trial, run_trials, Aggregate,
    DiagnosticRow, Trial, TrialFailure, TrialResult, TrialSet, RETRY_SEED_OFFSET,
};
