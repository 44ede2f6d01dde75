//! Reversible min-max scaling.
//!
//! Statistics must come from the training split only. Values outside the
//! fitted range are passed through (mapped outside `[0, 1]`), never clipped.

use serde::{Deserialize, Serialize};

use super::{Column, Dataset, FeatureRow, FeatureSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnRange {
    pub min: f64,
    pub max: f64,
}

impl ColumnRange {
    pub fn fit(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        values.into_iter().fold(None, |acc, v| {
            Some(match acc {
                None => ColumnRange { min: v, max: v },
                Some(r) => ColumnRange {
                    min: r.min.min(v),
                    max: r.max.max(v),
                },
            })
        })
    }

    /// A constant column. Scales to 0.0.
    pub fn is_degenerate(&self) -> bool {
        self.max == self.min
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    pub fn scale(&self, x: f64) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            (x - self.min) / self.span()
        }
    }

    pub fn unscale(&self, x: f64) -> f64 {
        if self.is_degenerate() {
            self.min
        } else {
            self.min + x * self.span()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationSpec {
    pub features: Vec<(Column, ColumnRange)>,
    pub target: ColumnRange,
}

/// Per-column min/max over `d` for the chosen features and the target.
pub fn fit_normalizer(d: &Dataset, features: &FeatureSet) -> Result<NormalizationSpec> {
    let fit = |c: Column| {
        ColumnRange::fit(d.samples().iter().map(|s| s.value(c))).ok_or(Error::EmptyDataset)
    };
    let features = features
        .columns()
        .iter()
        .map(|&c| Ok((c, fit(c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalizationSpec {
        features,
        target: fit(Column::TARGET)?,
    })
}

impl NormalizationSpec {
    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn feature_set(&self) -> FeatureSet {
        FeatureSet::new(self.features.iter().map(|(c, _)| *c).collect())
            .expect("spec built from a valid feature set")
    }

    pub fn degenerate_columns(&self) -> Vec<Column> {
        self.features
            .iter()
            .filter(|(_, r)| r.is_degenerate())
            .map(|(c, _)| *c)
            .chain(self.target.is_degenerate().then_some(Column::TARGET))
            .collect()
    }

    /// Scaled values of the selected feature columns, in spec order.
    pub fn normalize(&self, row: &FeatureRow) -> Vec<f64> {
        self.features
            .iter()
            .map(|(c, r)| r.scale(row.get(*c)))
            .collect()
    }

    pub fn normalize_target(&self, y: f64) -> f64 {
        self.target.scale(y)
    }

    pub fn denormalize_target(&self, y_scaled: f64) -> f64 {
        self.target.unscale(y_scaled)
    }

    pub(crate) fn check(&self) -> Result<()> {
        let ranges = self.features.iter().map(|(_, r)| r).chain([&self.target]);
        for r in ranges {
            if !(r.min.is_finite() && r.max.is_finite() && r.max >= r.min) {
                return Err(Error::ModelFile(format!(
                    "invalid column range [{}, {}]",
                    r.min, r.max
                )));
            }
        }
        FeatureSet::new(self.features.iter().map(|(c, _)| *c).collect()).map(|_| ())
    }
}
