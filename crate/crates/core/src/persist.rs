//! Versioned JSON model files.
//!
//! Layout:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "kind": "mlfn" | "grnn" | "ols",
//!   "parameters": { ...model fields, including "normalizer"... },
//!   "metadata": { "seed": 1, "init_seed": 1, "test_size": 5, "features": [...],
//!                 "training": {...} | null, "sigma_grid": [...] | null,
//!                 "train_rmse": 0.03, "test_rmse": 0.05 | null }
//! }
//! ```
//!
//! Files contain no timestamps or timings, so identical training runs give
//! byte-identical files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{FeatureRow, FeatureSet};
use crate::error::{Error, Result};
use crate::evalbench::{FittedModel, OlsModel};
use crate::grnn::GrnnModel;
use crate::mlfn::{MlfnModel, TrainingConfig};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "snake_case")]
pub enum StoredModel {
    Mlfn(MlfnModel),
    Grnn(GrnnModel),
    Ols(OlsModel),
}

impl StoredModel {
    pub fn kind(&self) -> &'static str {
        match self {
            StoredModel::Mlfn(_) => "mlfn",
            StoredModel::Grnn(_) => "grnn",
            StoredModel::Ols(_) => "ols",
        }
    }

    pub fn predict_features(&self, row: &FeatureRow) -> f64 {
        match self {
            StoredModel::Mlfn(m) => m.predict_features(row),
            StoredModel::Grnn(m) => m.predict_features(row),
            StoredModel::Ols(m) => m.predict_features(row),
        }
    }

    /// Re-runs constructor checks on deserialised parameters.
    fn check(self) -> Result<Self> {
        Ok(match self {
            StoredModel::Mlfn(m) => StoredModel::Mlfn(MlfnModel::new(m.network, m.normalizer)?),
            StoredModel::Grnn(m) => {
                StoredModel::Grnn(GrnnModel::new(m.inputs, m.targets, m.sigma, m.normalizer)?)
            }
            StoredModel::Ols(m) => StoredModel::Ols(OlsModel::new(
                m.coefficients,
                m.intercept,
                m.rank_deficient,
                m.normalizer,
            )?),
        })
    }
}

impl TryFrom<FittedModel> for StoredModel {
    type Error = Error;

    fn try_from(m: FittedModel) -> Result<Self> {
        match m {
            FittedModel::Mlfn(m) => Ok(StoredModel::Mlfn(m)),
            FittedModel::Grnn(m) => Ok(StoredModel::Grnn(m)),
            FittedModel::Ols(m) => Ok(StoredModel::Ols(m)),
            FittedModel::Mean(_) => {
                Err(Error::ModelFile("the mean baseline cannot be saved".into()))
            }
        }
    }
}

impl From<StoredModel> for FittedModel {
    fn from(m: StoredModel) -> Self {
        match m {
            StoredModel::Mlfn(m) => FittedModel::Mlfn(m),
            StoredModel::Grnn(m) => FittedModel::Grnn(m),
            StoredModel::Ols(m) => FittedModel::Ols(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    /// Split seed.
    pub seed: u64,
    /// Weight initialisation seed (differs from `seed` after a divergence retry).
    pub init_seed: u64,
    /// Held-out rows; 0 when trained on the full dataset.
    pub test_size: usize,
    pub features: FeatureSet,
    pub training: Option<TrainingConfig>,
    pub sigma_grid: Option<Vec<f64>>,
    pub train_rmse: f64,
    pub test_rmse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub model: StoredModel,
    pub metadata: TrainingMetadata,
}

impl ModelFile {
    pub fn new(model: StoredModel, metadata: TrainingMetadata) -> Self {
        ModelFile {
            format_version: FORMAT_VERSION,
            model,
            metadata,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::ModelFile("missing format_version".into()))?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(Error::UnsupportedVersion(
                u32::try_from(version).unwrap_or(u32::MAX),
            ));
        }
        let file: ModelFile = serde_json::from_value(value)?;
        Ok(ModelFile {
            model: file.model.check()?,
            ..file
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ModelFile::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::builtin_dataset;
    use crate::evalbench::{fit_model, ExperimentConfig, ModelSpec};

    fn metadata() -> TrainingMetadata {
        TrainingMetadata {
            seed: 1,
            init_seed: 1,
            test_size: 0,
            features: FeatureSet::all(),
            training: None,
            sigma_grid: None,
            train_rmse: 0.0,
            test_rmse: None,
        }
    }

    #[test]
    fn round_trip_preserves_predictions_for_all_kinds() {
        let d = builtin_dataset();
        let mut cfg = ExperimentConfig::default();
        cfg.training.max_epochs = 200;
        for spec in [
            ModelSpec::Mlfn { hidden: 3 },
            ModelSpec::Grnn,
            ModelSpec::Ols,
        ] {
            let (m, _) = fit_model(spec, &d, &cfg, 5).unwrap();
            let file = ModelFile::new(StoredModel::try_from(m.clone()).unwrap(), metadata());
            let back = ModelFile::from_json(&file.to_json().unwrap()).unwrap();
            assert_eq!(back, file);
            for s in d.samples() {
                let a = m.predict_features(&s.features());
                let b = back.model.predict_features(&s.features());
                assert!((a - b).abs() <= 1e-12, "{spec}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn unknown_version_rejected() {
        let (m, _) = fit_model(
            ModelSpec::Ols,
            &builtin_dataset(),
            &ExperimentConfig::default(),
            1,
        )
        .unwrap();
        let text = ModelFile::new(m.try_into().unwrap(), metadata())
            .to_json()
            .unwrap()
            .replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(
            ModelFile::from_json(&text),
            Err(Error::UnsupportedVersion(2))
        ));
        assert!(matches!(
            ModelFile::from_json("{}"),
            Err(Error::ModelFile(_))
        ));
    }

    #[test]
    fn corrupted_parameters_rejected() {
        let (m, _) = fit_model(
            ModelSpec::Ols,
            &builtin_dataset(),
            &ExperimentConfig::default(),
            1,
        )
        .unwrap();
        let file = ModelFile::new(m.try_into().unwrap(), metadata());
        let mut value: serde_json::Value = serde_json::from_str(&file.to_json().unwrap()).unwrap();
        value["parameters"]["coefficients"]
            .as_array_mut()
            .unwrap()
            .pop();
        assert!(ModelFile::from_json(&value.to_string()).is_err());
    }

    #[test]
    fn mean_model_not_storable() {
        let (m, _) = fit_model(
            ModelSpec::Mean,
            &builtin_dataset(),
            &ExperimentConfig::default(),
            1,
        )
        .unwrap();
        assert!(StoredModel::try_from(m).is_err());
    }
}
