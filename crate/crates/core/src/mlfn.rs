//! Single-hidden-layer feed-forward regression network.
//!
//! The hidden layer uses `tanh`, the output is linear:
//!
//! ```text
//! y = output_bias + sum_j output_weights[j] * tanh(hidden_biases[j] + sum_i hidden_weights[j][i] * x[i])
//! ```
//!
//! Training is full-batch gradient descent with momentum on the mean
//! squared error in scaled units, returning the best epoch's parameters.

use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{fit_normalizer, Dataset, FeatureRow, FeatureSet, NormalizationSpec, Sample};
use crate::error::{Error, Result};
use crate::rng::{seeded, Stream};

/// Gradient L2 norm at or below which training stops as converged.
pub const CONVERGENCE_GRAD_NORM: f64 = 1e-10;

/// Network weights. Hidden weights are row-major, `n_hidden × n_inputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub n_inputs: usize,
    pub n_hidden: usize,
    pub hidden_weights: Vec<f64>,
    pub hidden_biases: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

/// Partial derivatives of the loss, laid out like [`Network`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub hidden_weights: Vec<f64>,
    pub hidden_biases: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

impl Gradient {
    /// Same order as [`Network::params`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut v =
            Vec::with_capacity(self.hidden_weights.len() + 2 * self.hidden_biases.len() + 1);
        v.extend_from_slice(&self.hidden_weights);
        v.extend_from_slice(&self.hidden_biases);
        v.extend_from_slice(&self.output_weights);
        v.push(self.output_bias);
        v
    }

    pub fn norm(&self) -> f64 {
        self.flatten().iter().map(|g| g * g).sum::<f64>().sqrt()
    }
}

pub fn param_count(n_inputs: usize, n_hidden: usize) -> usize {
    n_inputs * n_hidden + 2 * n_hidden + 1
}

impl Network {
    /// Weights uniform in `±1/sqrt(fan_in)`, biases zero.
    pub fn init(n_inputs: usize, n_hidden: usize, seed: u64) -> Result<Self> {
        let mut net = Network::zeros(n_inputs, n_hidden)?;
        let mut rng = seeded(seed, Stream::Init);
        let hidden_bound = 1.0 / (n_inputs as f64).sqrt();
        for w in &mut net.hidden_weights {
            *w = rng.gen_range(-hidden_bound..=hidden_bound);
        }
        let output_bound = 1.0 / (n_hidden as f64).sqrt();
        for w in &mut net.output_weights {
            *w = rng.gen_range(-output_bound..=output_bound);
        }
        Ok(net)
    }

    pub fn zeros(n_inputs: usize, n_hidden: usize) -> Result<Self> {
        if n_inputs == 0 || n_hidden == 0 {
            return Err(Error::InvalidArchitecture(format!(
                "need at least one input and one hidden node, got {n_inputs} inputs and {n_hidden} hidden"
            )));
        }
        Ok(Network {
            n_inputs,
            n_hidden,
            hidden_weights: vec![0.0; n_inputs * n_hidden],
            hidden_biases: vec![0.0; n_hidden],
            output_weights: vec![0.0; n_hidden],
            output_bias: 0.0,
        })
    }

    pub fn n_params(&self) -> usize {
        param_count(self.n_inputs, self.n_hidden)
    }

    pub fn params(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_params());
        v.extend_from_slice(&self.hidden_weights);
        v.extend_from_slice(&self.hidden_biases);
        v.extend_from_slice(&self.output_weights);
        v.push(self.output_bias);
        v
    }

    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.n_params() {
            return Err(Error::DimensionMismatch {
                expected: self.n_params(),
                actual: p.len(),
            });
        }
        let (hw, rest) = p.split_at(self.hidden_weights.len());
        let (hb, rest) = rest.split_at(self.n_hidden);
        let (ow, ob) = rest.split_at(self.n_hidden);
        self.hidden_weights.copy_from_slice(hw);
        self.hidden_biases.copy_from_slice(hb);
        self.output_weights.copy_from_slice(ow);
        self.output_bias = ob[0];
        Ok(())
    }

    /// Checks dimensions and finiteness, e.g. after deserialising.
    pub fn check(&self) -> Result<()> {
        if self.n_inputs == 0 || self.n_hidden == 0 {
            return Err(Error::InvalidArchitecture("empty layer".into()));
        }
        let dims = [
            (self.hidden_weights.len(), self.n_inputs * self.n_hidden),
            (self.hidden_biases.len(), self.n_hidden),
            (self.output_weights.len(), self.n_hidden),
        ];
        for (actual, expected) in dims {
            if actual != expected {
                return Err(Error::DimensionMismatch { expected, actual });
            }
        }
        if !self.params().iter().all(|w| w.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_inputs {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs,
                actual: x.len(),
            });
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(self.forward_unchecked(x))
    }

    fn forward_unchecked(&self, x: &[f64]) -> f64 {
        let mut y = self.output_bias;
        for j in 0..self.n_hidden {
            y += self.output_weights[j] * self.hidden_activation(j, x);
        }
        y
    }

    fn hidden_activation(&self, j: usize, x: &[f64]) -> f64 {
        let row = &self.hidden_weights[j * self.n_inputs..(j + 1) * self.n_inputs];
        let pre: f64 = self.hidden_biases[j] + row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>();
        pre.tanh()
    }

    /// Mean squared error over the batch and its analytic gradient.
    pub fn loss_and_gradient(
        &self,
        inputs: &[Vec<f64>],
        targets: &[f64],
    ) -> Result<(f64, Gradient)> {
        if inputs.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if inputs.len() != targets.len() {
            return Err(Error::LengthMismatch(inputs.len(), targets.len()));
        }
        if let Some(x) = inputs.iter().find(|x| x.len() != self.n_inputs) {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs,
                actual: x.len(),
            });
        }

        let n = inputs.len() as f64;
        let mut grad = Gradient {
            hidden_weights: vec![0.0; self.hidden_weights.len()],
            hidden_biases: vec![0.0; self.n_hidden],
            output_weights: vec![0.0; self.n_hidden],
            output_bias: 0.0,
        };
        let mut hidden = vec![0.0; self.n_hidden];
        let mut sse = 0.0;
        for (x, &y) in inputs.iter().zip(targets) {
            let mut pred = self.output_bias;
            for (j, h) in hidden.iter_mut().enumerate() {
                *h = self.hidden_activation(j, x);
                pred += self.output_weights[j] * *h;
            }
            let err = pred - y;
            sse += err * err;

            // dL/dpred for L = mean((pred - y)^2)
            let e = 2.0 * err / n;
            grad.output_bias += e;
            for (j, &h) in hidden.iter().enumerate() {
                grad.output_weights[j] += e * h;
                let delta = e * self.output_weights[j] * (1.0 - h * h);
                grad.hidden_biases[j] += delta;
                let row = &mut grad.hidden_weights[j * self.n_inputs..(j + 1) * self.n_inputs];
                for (g, xi) in row.iter_mut().zip(x) {
                    *g += delta * xi;
                }
            }
        }
        Ok((sse / n, grad))
    }

    pub fn gradient(&self, inputs: &[Vec<f64>], targets: &[f64]) -> Result<Gradient> {
        self.loss_and_gradient(inputs, targets).map(|(_, g)| g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub max_epochs: usize,
    pub patience_epochs: usize,
    /// Minimum drop in best training RMSE (scaled units) that resets patience.
    pub min_improvement: f64,
    pub rng_seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            learning_rate: 0.05,
            momentum: 0.9,
            max_epochs: 20_000,
            patience_epochs: 500,
            min_improvement: 1e-6,
            rng_seed: 1,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning_rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::InvalidConfig(format!(
                "momentum must be in [0, 1), got {}",
                self.momentum
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidConfig("max_epochs must be >= 1".into()));
        }
        if self.patience_epochs == 0 {
            return Err(Error::InvalidConfig("patience_epochs must be >= 1".into()));
        }
        if !(self.min_improvement.is_finite() && self.min_improvement >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "min_improvement must be >= 0, got {}",
                self.min_improvement
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    Patience,
    MaxEpochs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingHistory {
    /// Training RMSE per epoch, scaled target units.
    pub rmse: Vec<f64>,
    /// Running minimum of `rmse`; its last entry is the returned model's RMSE.
    pub best_so_far: Vec<f64>,
    /// 1-based epoch whose parameters were returned.
    pub best_epoch: usize,
    pub stop_reason: StopReason,
    pub wall_time: Duration,
}

impl TrainingHistory {
    pub fn epochs(&self) -> usize {
        self.rmse.len()
    }

    pub fn best_rmse(&self) -> f64 {
        *self.best_so_far.last().expect("at least one epoch")
    }
}

/// A trained network bound to the scaling it was trained under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlfnModel {
    pub network: Network,
    pub normalizer: NormalizationSpec,
}

impl MlfnModel {
    pub fn new(network: Network, normalizer: NormalizationSpec) -> Result<Self> {
        network.check()?;
        normalizer.check()?;
        if network.n_inputs != normalizer.n_features() {
            return Err(Error::DimensionMismatch {
                expected: normalizer.n_features(),
                actual: network.n_inputs,
            });
        }
        Ok(MlfnModel {
            network,
            normalizer,
        })
    }

    pub fn n_hidden(&self) -> usize {
        self.network.n_hidden
    }

    pub fn predict(&self, s: &Sample) -> f64 {
        self.predict_features(&s.features())
    }

    /// Raw-unit prediction. Non-finite inputs give a non-finite output.
    pub fn predict_features(&self, row: &FeatureRow) -> f64 {
        let x = self.normalizer.normalize(row);
        self.normalizer
            .denormalize_target(self.network.forward_unchecked(&x))
    }
}

/// Fits the scaling on `train`, then runs full-batch momentum descent.
pub fn train(
    train: &Dataset,
    features: &FeatureSet,
    n_hidden: usize,
    cfg: &TrainingConfig,
) -> Result<(MlfnModel, TrainingHistory)> {
    cfg.validate()?;
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
    let init = Network::init(features.len(), n_hidden, cfg.rng_seed)?;
    let (network, history) = descend(init, &inputs, &targets, cfg)?;
    Ok((MlfnModel::new(network, normalizer)?, history))
}

/// The optimisation loop on already-scaled data.
pub fn descend(
    mut net: Network,
    inputs: &[Vec<f64>],
    targets: &[f64],
    cfg: &TrainingConfig,
) -> Result<(Network, TrainingHistory)> {
    cfg.validate()?;
    let started = Instant::now();
    let mut params = net.params();
    let mut velocity = vec![0.0; params.len()];
    let mut best_params = params.clone();
    let mut best = f64::INFINITY;
    let mut best_epoch = 0;
    let mut anchor = f64::INFINITY;
    let mut stale = 0;
    let mut rmse_log = Vec::new();
    let mut best_log = Vec::new();
    let mut stop_reason = StopReason::MaxEpochs;

    for epoch in 1..=cfg.max_epochs {
        net.set_params(&params)?;
        let (loss, grad) = net.loss_and_gradient(inputs, targets)?;
        let grad = grad.flatten();
        if !loss.is_finite() || !grad.iter().all(|g| g.is_finite()) {
            return Err(Error::Divergence { epoch });
        }
        let rmse = loss.sqrt();
        rmse_log.push(rmse);
        if rmse < best {
            best = rmse;
            best_epoch = epoch;
            best_params.copy_from_slice(&params);
        }
        best_log.push(best);

        if rmse < anchor - cfg.min_improvement {
            anchor = rmse;
            stale = 0;
        } else {
            stale += 1;
        }
        let grad_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if grad_norm <= CONVERGENCE_GRAD_NORM {
            stop_reason = StopReason::Converged;
            break;
        }
        if stale >= cfg.patience_epochs {
            stop_reason = StopReason::Patience;
            break;
        }

        for ((p, v), g) in params.iter_mut().zip(&mut velocity).zip(&grad) {
            *v = cfg.momentum * *v - cfg.learning_rate * g;
            *p += *v;
        }
    }

    net.set_params(&best_params)?;
    Ok((
        net,
        TrainingHistory {
            rmse: rmse_log,
            best_so_far: best_log,
            best_epoch,
            stop_reason,
            wall_time: started.elapsed(),
        },
    ))
}
