use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, FeatureRow, FeatureSet, NormalizationSpec};
use crate::error::{Error, Result};
use crate::evalbench::ols::{self, OlsModel};
use crate::grnn::{self, default_sigma_grid, GrnnModel};
use crate::mlfn::{self, MlfnModel, StopReason, TrainingConfig};

/// Which regressor to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelSpec {
    Grnn,
    Mlfn {
        hidden: usize,
    },
    Ols,
    /// Predicts the training-target mean; the reference floor.
    Mean,
}

impl ModelSpec {
    /// GRNN followed by MLFN with 2 to 16 hidden nodes.
    pub fn default_sweep() -> Vec<ModelSpec> {
        std::iter::once(ModelSpec::Grnn)
            .chain((2..=16).map(|hidden| ModelSpec::Mlfn { hidden }))
            .collect()
    }

    /// Parses a comma-separated list; `mlfn:a-b` expands to a range.
    pub fn parse_list(s: &str) -> Result<Vec<ModelSpec>> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim) {
            match item.strip_prefix("mlfn:").and_then(|r| r.split_once('-')) {
                Some((lo, hi)) => {
                    let lo: usize = lo
                        .parse()
                        .map_err(|_| Error::InvalidModelSpec(item.into()))?;
                    let hi: usize = hi
                        .parse()
                        .map_err(|_| Error::InvalidModelSpec(item.into()))?;
                    if lo == 0 || hi < lo {
                        return Err(Error::InvalidModelSpec(item.into()));
                    }
                    out.extend((lo..=hi).map(|hidden| ModelSpec::Mlfn { hidden }));
                }
                None => out.push(item.parse()?),
            }
        }
        Ok(out)
    }

    /// Filesystem-safe identifier.
    pub fn slug(&self) -> String {
        match self {
            ModelSpec::Mlfn { hidden } => format!("mlfn-{hidden}"),
            other => other.to_string(),
        }
    }

    /// Row label in the console table.
    pub fn label(&self) -> String {
        match self {
            ModelSpec::Grnn => "GRNN".into(),
            ModelSpec::Mlfn { hidden } => format!("MLFN {hidden} Nodes"),
            ModelSpec::Ols => "OLS".into(),
            ModelSpec::Mean => "Mean".into(),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Grnn => f.write_str("grnn"),
            ModelSpec::Mlfn { hidden } => write!(f, "mlfn:{hidden}"),
            ModelSpec::Ols => f.write_str("ols"),
            ModelSpec::Mean => f.write_str("mean"),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "grnn" => Ok(ModelSpec::Grnn),
            "ols" => Ok(ModelSpec::Ols),
            "mean" => Ok(ModelSpec::Mean),
            other => {
                let hidden = other
                    .strip_prefix("mlfn:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::InvalidModelSpec(s.into()))?;
                Ok(ModelSpec::Mlfn { hidden })
            }
        }
    }
}

/// Settings shared by every model in an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub features: FeatureSet,
    /// MLFN optimiser settings; `rng_seed` is replaced per trial.
    pub training: TrainingConfig,
    pub sigma_grid: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            features: FeatureSet::all(),
            training: TrainingConfig::default(),
            sigma_grid: default_sigma_grid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanModel {
    pub value: f64,
}

/// Any trained regressor.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Mlfn(MlfnModel),
    Grnn(GrnnModel),
    Ols(OlsModel),
    Mean(MeanModel),
}

impl FittedModel {
    pub fn predict_features(&self, row: &FeatureRow) -> f64 {
        match self {
            FittedModel::Mlfn(m) => m.predict_features(row),
            FittedModel::Grnn(m) => m.predict_features(row),
            FittedModel::Ols(m) => m.predict_features(row),
            FittedModel::Mean(m) => m.value,
        }
    }

    pub fn spec(&self) -> ModelSpec {
        match self {
            FittedModel::Mlfn(m) => ModelSpec::Mlfn {
                hidden: m.n_hidden(),
            },
            FittedModel::Grnn(_) => ModelSpec::Grnn,
            FittedModel::Ols(_) => ModelSpec::Ols,
            FittedModel::Mean(_) => ModelSpec::Mean,
        }
    }

    pub fn normalizer(&self) -> Option<&NormalizationSpec> {
        match self {
            FittedModel::Mlfn(m) => Some(&m.normalizer),
            FittedModel::Grnn(m) => Some(&m.normalizer),
            FittedModel::Ols(m) => Some(&m.normalizer),
            FittedModel::Mean(_) => None,
        }
    }
}

/// Side information from fitting.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitNotes {
    pub epochs: Option<usize>,
    pub stop_reason: Option<StopReason>,
    pub sigma: Option<f64>,
    pub rank_deficient: bool,
    pub warning: Option<String>,
}

/// Fits one model on `train`. `seed` drives MLFN weight initialisation only.
pub fn fit_model(
    spec: ModelSpec,
    train: &Dataset,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<(FittedModel, FitNotes)> {
    match spec {
        ModelSpec::Mlfn { hidden } => {
            let training = TrainingConfig {
                rng_seed: seed,
                ..cfg.training.clone()
            };
            let (m, h) = mlfn::train(train, &cfg.features, hidden, &training)?;
            let notes = FitNotes {
                epochs: Some(h.epochs()),
                stop_reason: Some(h.stop_reason),
                ..Default::default()
            };
            Ok((FittedModel::Mlfn(m), notes))
        }
        ModelSpec::Grnn => {
            let fit = grnn::fit(train, &cfg.features, &cfg.sigma_grid)?;
            let notes = FitNotes {
                sigma: Some(fit.model.sigma),
                warning: fit.warning,
                ..Default::default()
            };
            Ok((FittedModel::Grnn(fit.model), notes))
        }
        ModelSpec::Ols => {
            let m = ols::fit(train, &cfg.features)?;
            let notes = FitNotes {
                rank_deficient: m.rank_deficient,
                warning: m
                    .rank_deficient
                    .then(|| "design matrix is rank deficient; used pseudo-inverse".to_string()),
                ..Default::default()
            };
            Ok((FittedModel::Ols(m), notes))
        }
        ModelSpec::Mean => {
            let value = crate::numeric::mean(&train.targets());
            Ok((FittedModel::Mean(MeanModel { value }), FitNotes::default()))
        }
    }
}
