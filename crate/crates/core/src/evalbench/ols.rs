//! Multiple linear regression baseline.
//!
//! Fitted on min-max scaled features and target. Full-rank designs are
//! solved through the normal equations; rank-deficient ones fall back to
//! the SVD pseudo-inverse and are flagged.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::{fit_normalizer, Dataset, FeatureRow, FeatureSet, NormalizationSpec, Sample};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsModel {
    /// Scaled-space slopes, one per feature in normalizer order.
    pub coefficients: Vec<f64>,
    /// Scaled-space intercept.
    pub intercept: f64,
    /// Solved through the pseudo-inverse because the design lacked full column rank.
    pub rank_deficient: bool,
    pub normalizer: NormalizationSpec,
}

impl OlsModel {
    pub fn new(
        coefficients: Vec<f64>,
        intercept: f64,
        rank_deficient: bool,
        normalizer: NormalizationSpec,
    ) -> Result<Self> {
        normalizer.check()?;
        if coefficients.len() != normalizer.n_features() {
            return Err(Error::DimensionMismatch {
                expected: normalizer.n_features(),
                actual: coefficients.len(),
            });
        }
        if !coefficients
            .iter()
            .chain([&intercept])
            .all(|c| c.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(OlsModel {
            coefficients,
            intercept,
            rank_deficient,
            normalizer,
        })
    }

    pub fn predict_scaled(&self, x: &[f64]) -> f64 {
        self.intercept
            + self
                .coefficients
                .iter()
                .zip(x)
                .map(|(b, v)| b * v)
                .sum::<f64>()
    }

    pub fn predict(&self, s: &Sample) -> f64 {
        self.predict_features(&s.features())
    }

    pub fn predict_features(&self, row: &FeatureRow) -> f64 {
        let x = self.normalizer.normalize(row);
        self.normalizer.denormalize_target(self.predict_scaled(&x))
    }

    /// Slopes and intercept in raw units. Degenerate feature columns get slope 0.
    pub fn raw_coefficients(&self) -> (Vec<f64>, f64) {
        let t = self.normalizer.target;
        let y_span = if t.is_degenerate() { 0.0 } else { t.span() };
        let mut intercept = t.min + y_span * self.intercept;
        let slopes = self
            .coefficients
            .iter()
            .zip(&self.normalizer.features)
            .map(|(b, (_, r))| {
                if r.is_degenerate() {
                    0.0
                } else {
                    intercept -= y_span * b * r.min / r.span();
                    y_span * b / r.span()
                }
            })
            .collect();
        (slopes, intercept)
    }
}

/// Least-squares fit of the scaled target on the scaled features.
pub fn fit(train: &Dataset, features: &FeatureSet) -> Result<OlsModel> {
    let normalizer = fit_normalizer(train, features)?;
    let rows: Vec<Vec<f64>> = train
        .samples()
        .iter()
        .map(|s| normalizer.normalize(&s.features()))
        .collect();
    let y: Vec<f64> = train
        .samples()
        .iter()
        .map(|s| normalizer.normalize_target(s.target()))
        .collect();
    let (beta, rank_deficient) = least_squares(&rows, &y)?;
    OlsModel::new(beta[1..].to_vec(), beta[0], rank_deficient, normalizer)
}

/// Design matrix with a leading column of ones.
pub fn design_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let p = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(
        rows.len(),
        p + 1,
        |i, j| if j == 0 { 1.0 } else { rows[i][j - 1] },
    )
}

/// Returns `[intercept, slopes...]` and whether the pseudo-inverse was needed.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, bool)> {
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if rows.len() != y.len() {
        return Err(Error::LengthMismatch(rows.len(), y.len()));
    }
    let x = design_matrix(rows);
    let yv = DVector::from_column_slice(y);

    let svd = x.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let tol = (x.nrows().max(x.ncols()) as f64) * f64::EPSILON * s_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();

    if rank == x.ncols() {
        let xt = x.transpose();
        if let Some(chol) = (&xt * &x).cholesky() {
            let beta = chol.solve(&(&xt * &yv));
            if beta.iter().all(|b| b.is_finite()) {
                return Ok((beta.iter().copied().collect(), false));
            }
        }
    }
    let beta = svd
        .solve(&yv, tol)
        .map_err(|e| Error::InvalidConfig(format!("pseudo-inverse failed: {e}")))?;
    Ok((beta.iter().copied().collect(), true))
}
