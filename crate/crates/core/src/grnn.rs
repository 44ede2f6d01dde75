//! General regression neural network (Specht).
//!
//! A prediction is the Gaussian-kernel weighted mean of the stored training
//! targets, with distances measured in min-max scaled feature space. The
//! bandwidth is picked from a grid by leave-one-out RMSE.

use serde::{Deserialize, Serialize};

use crate::dataset::{fit_normalizer, Dataset, FeatureRow, FeatureSet, NormalizationSpec, Sample};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, log_grid};

/// Kernel weight sums below this fall back to the nearest exemplar.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-300;

pub const DEFAULT_GRID_LO: f64 = 0.01;
pub const DEFAULT_GRID_HI: f64 = 3.0;
pub const DEFAULT_GRID_POINTS: usize = 50;

pub fn default_sigma_grid() -> Vec<f64> {
    sigma_grid(DEFAULT_GRID_LO, DEFAULT_GRID_HI, DEFAULT_GRID_POINTS)
}

/// `n` bandwidths from `lo` to `hi` inclusive, log-spaced.
pub fn sigma_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    log_grid(lo, hi, n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrnnModel {
    /// Scaled feature vectors of the training rows.
    pub inputs: Vec<Vec<f64>>,
    /// Scaled targets of the training rows.
    pub targets: Vec<f64>,
    pub sigma: f64,
    pub normalizer: NormalizationSpec,
}

/// Result of bandwidth selection.
#[derive(Debug, Clone, PartialEq)]
pub struct GrnnFit {
    pub model: GrnnModel,
    /// `(sigma, leave-one-out RMSE in scaled units)` for each grid point, in grid order.
    /// Empty when leave-one-out is undefined.
    pub loo_curve: Vec<(f64, f64)>,
    pub warning: Option<String>,
}

impl GrnnModel {
    pub fn new(
        inputs: Vec<Vec<f64>>,
        targets: Vec<f64>,
        sigma: f64,
        normalizer: NormalizationSpec,
    ) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if inputs.len() != targets.len() {
            return Err(Error::LengthMismatch(inputs.len(), targets.len()));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "sigma must be finite and > 0, got {sigma}"
            )));
        }
        normalizer.check()?;
        let dim = normalizer.n_features();
        if let Some(x) = inputs.iter().find(|x| x.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: x.len(),
            });
        }
        if !inputs
            .iter()
            .flatten()
            .chain(&targets)
            .all(|v| v.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(GrnnModel {
            inputs,
            targets,
            sigma,
            normalizer,
        })
    }

    pub fn n_exemplars(&self) -> usize {
        self.inputs.len()
    }

    pub fn predict(&self, s: &Sample) -> f64 {
        self.predict_features(&s.features())
    }

    pub fn predict_features(&self, row: &FeatureRow) -> f64 {
        let x = self.normalizer.normalize(row);
        self.normalizer.denormalize_target(kernel_average(
            &self.inputs,
            &self.targets,
            &x,
            self.sigma,
            None,
        ))
    }

    /// Prediction in scaled target units for an already scaled query.
    pub fn predict_scaled(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.normalizer.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.normalizer.n_features(),
                actual: x.len(),
            });
        }
        Ok(kernel_average(
            &self.inputs,
            &self.targets,
            x,
            self.sigma,
            None,
        ))
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Weighted mean of `targets`, optionally leaving out one exemplar.
/// At least one exemplar must remain.
fn kernel_average(
    inputs: &[Vec<f64>],
    targets: &[f64],
    query: &[f64],
    sigma: f64,
    skip: Option<usize>,
) -> f64 {
    let two_sigma_sq = 2.0 * sigma * sigma;
    let terms: Vec<(f64, f64, f64)> = inputs
        .iter()
        .zip(targets)
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .map(|(_, (x, &y))| {
            let d2 = squared_distance(x, query);
            (d2, (-d2 / two_sigma_sq).exp(), y)
        })
        .collect();

    let weight_sum = compensated_sum(terms.iter().map(|t| t.1));
    if weight_sum.is_nan() || weight_sum < UNDERFLOW_THRESHOLD {
        // Nearest exemplar; ties go to the smaller target so the result
        // does not depend on storage order.
        return terms
            .iter()
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.2.total_cmp(&b.2)))
            .map(|t| t.2)
            .expect("at least one exemplar");
    }
    compensated_sum(terms.iter().map(|t| t.1 * t.2)) / weight_sum
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty bandwidth grid".into()));
    }
    if let Some(s) = grid.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::InvalidGrid(format!(
            "bandwidth {s} is not a positive number"
        )));
    }
    Ok(())
}

/// Leave-one-out RMSE (scaled units) of a bandwidth over the stored exemplars.
pub fn loo_rmse(inputs: &[Vec<f64>], targets: &[f64], sigma: f64) -> f64 {
    let sq: Vec<f64> = (0..inputs.len())
        .map(|i| {
            let p = kernel_average(inputs, targets, &inputs[i], sigma, Some(i));
            (p - targets[i]).powi(2)
        })
        .collect();
    (compensated_sum(sq) / inputs.len() as f64).sqrt()
}

/// Stores every training row and selects the bandwidth with the lowest
/// leave-one-out RMSE, preferring the larger bandwidth on ties.
pub fn fit(train: &Dataset, features: &FeatureSet, sigma_grid: &[f64]) -> Result<GrnnFit> {
    check_grid(sigma_grid)?;
    let normalizer = fit_normalizer(train, features)?;
    let inputs: Vec<Vec<f64>> = train
        .samples()
        .iter()
        .map(|s| normalizer.normalize(&s.features()))
        .collect();
    let targets: Vec<f64> = train
        .samples()
        .iter()
        .map(|s| normalizer.normalize_target(s.target()))
        .collect();

    if inputs.len() < 2 {
        let mut sorted = sigma_grid.to_vec();
        sorted.sort_by(f64::total_cmp);
        let sigma = sorted[(sorted.len() - 1) / 2];
        let model = GrnnModel::new(inputs, targets, sigma, normalizer)?;
        return Ok(GrnnFit {
            model,
            loo_curve: vec![],
            warning: Some(format!(
                "leave-one-out needs at least two exemplars; using median grid bandwidth {sigma}"
            )),
        });
    }

    let loo_curve: Vec<(f64, f64)> = sigma_grid
        .iter()
        .map(|&s| (s, loo_rmse(&inputs, &targets, s)))
        .collect();
    let (sigma, _) = loo_curve
        .iter()
        .copied()
        .reduce(|best, cand| {
            if cand.1 < best.1 || (cand.1 == best.1 && cand.0 > best.0) {
                cand
            } else {
                best
            }
        })
        .expect("grid is non-empty");
    let model = GrnnModel::new(inputs, targets, sigma, normalizer)?;
    Ok(GrnnFit {
        model,
        loo_curve,
        warning: None,
    })
}
