//! Time series container, AR model representation, prediction and simulation.
//!
//! Everything here is a pure function of its inputs. Predictions and residuals
//! are always aligned to the evaluation span `values[order..]`; the first
//! `order` samples only condition the recursion.

use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered, finite, real-valued samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    sample_interval: Option<Duration>,
    label: Option<String>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self {
            values,
            sample_interval: None,
            label: None,
        })
    }

    pub fn with_sample_interval(mut self, interval: Duration) -> Self {
        self.sample_interval = Some(interval);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sample_interval(&self) -> Option<Duration> {
        self.sample_interval
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Samples `order..` that predictions are compared against.
    pub fn evaluation_span(&self, order: usize) -> &[f64] {
        &self.values[order.min(self.values.len())..]
    }

    pub fn is_constant(&self) -> bool {
        let first = self.values[0];
        self.values.iter().all(|&v| v == first)
    }

    /// Returns a copy with the same metadata and new values.
    pub(crate) fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            sample_interval: self.sample_interval,
            label: self.label.clone(),
        }
    }
}

/// Validates raw samples into a [`TimeSeries`].
pub fn validate_series(raw: &[f64]) -> Result<TimeSeries> {
    TimeSeries::new(raw.to_vec())
}

/// Subtracts the sample mean. A constant series maps to exact zeros.
pub fn demean(series: &TimeSeries) -> (TimeSeries, f64) {
    if series.is_constant() {
        let mean = series.values[0];
        return (series.map_values(|_| 0.0), mean);
    }
    let mean = series.mean();
    (series.map_values(|v| v - mean), mean)
}

/// `X_t = C + sum_i phi_i X_{t-i} + e_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModel {
    coefficients: Vec<f64>,
    intercept: f64,
    innovation_variance: f64,
}

impl ArModel {
    pub fn new(coefficients: Vec<f64>, intercept: f64, innovation_variance: f64) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) || !intercept.is_finite() {
            return Err(Error::InvalidModel("non-finite parameter".into()));
        }
        if !(innovation_variance >= 0.0) || !innovation_variance.is_finite() {
            return Err(Error::InvalidModel(format!(
                "innovation variance {innovation_variance} must be finite and nonnegative"
            )));
        }
        Ok(Self {
            coefficients,
            intercept,
            innovation_variance,
        })
    }

    /// Model with zero innovation variance, for evaluation only.
    pub fn deterministic(coefficients: Vec<f64>, intercept: f64) -> Result<Self> {
        Self::new(coefficients, intercept, 0.0)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn innovation_variance(&self) -> f64 {
        self.innovation_variance
    }

    fn next_value(&self, history: &[f64]) -> f64 {
        // history[history.len() - 1] is X_{t-1}
        let last = history.len();
        self.coefficients
            .iter()
            .enumerate()
            .fold(self.intercept, |acc, (i, phi)| acc + phi * history[last - 1 - i])
    }
}

/// How the estimated data are produced from a fitted model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionMode {
    /// Every prediction conditions on actual past samples.
    #[default]
    OneStepAhead,
    /// Predictions are fed back after the initial `order`-sample window.
    FreeRun,
}

/// Predictions for samples `order..n` of the series.
pub fn predict(model: &ArModel, series: &TimeSeries, mode: PredictionMode) -> Result<Vec<f64>> {
    predict_values(model, series.values(), mode)
}

pub(crate) fn predict_values(model: &ArModel, values: &[f64], mode: PredictionMode) -> Result<Vec<f64>> {
    let order = model.order();
    if values.len() <= order {
        return Err(Error::SeriesTooShort {
            len: values.len(),
            required: order + 1,
        });
    }
    let out = match mode {
        PredictionMode::OneStepAhead => (order..values.len())
            .map(|t| model.next_value(&values[..t]))
            .collect(),
        PredictionMode::FreeRun => {
            let mut history = values[..order].to_vec();
            history.reserve(values.len() - order);
            for _ in order..values.len() {
                let next = model.next_value(&history);
                history.push(next);
            }
            history.split_off(order)
        }
    };
    Ok(out)
}

/// Sum of squared differences between actual and estimated data.
pub fn residual_sum_of_squares(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    if actual.len() != estimated.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: estimated.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(actual
        .iter()
        .zip(estimated)
        .map(|(a, e)| (a - e) * (a - e))
        .sum())
}

/// RSS of a model over the evaluation span of a series.
pub fn model_rss(model: &ArModel, series: &TimeSeries, mode: PredictionMode) -> Result<f64> {
    let estimated = predict(model, series, mode)?;
    residual_sum_of_squares(series.evaluation_span(model.order()), &estimated)
}

/// Intercept minimizing the RSS of `coefficients` on `values` under `mode`.
///
/// Predictions are affine in the intercept, `pred_t = b_t + C a_t`, so the
/// minimizer is `sum a (x - b) / sum a^2`. In one-step mode `a_t = 1` and this
/// reduces to the mean one-step residual of the intercept-free model.
/// Falls back to the stationary-mean intercept when the free-run recursion
/// diverges.
pub fn optimal_intercept(coefficients: &[f64], values: &[f64], mode: PredictionMode) -> f64 {
    let order = coefficients.len();
    if values.len() <= order {
        return 0.0;
    }
    let lagged = |hist: &[f64]| -> f64 {
        let last = hist.len();
        coefficients
            .iter()
            .enumerate()
            .map(|(i, phi)| phi * hist[last - 1 - i])
            .sum()
    };
    match mode {
        PredictionMode::OneStepAhead => {
            let span = values.len() - order;
            let total: f64 = (order..values.len())
                .map(|t| values[t] - lagged(&values[..t]))
                .sum();
            total / span as f64
        }
        PredictionMode::FreeRun => {
            let mut unit = vec![0.0; order];
            let mut free = values[..order].to_vec();
            let (mut num, mut den) = (0.0, 0.0);
            for &actual in &values[order..] {
                let a = 1.0 + lagged(&unit);
                let b = lagged(&free);
                num += a * (actual - b);
                den += a * a;
                unit.push(a);
                free.push(b);
            }
            let c = num / den;
            if c.is_finite() {
                c
            } else {
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                mean * (1.0 - coefficients.iter().sum::<f64>())
            }
        }
    }
}

/// Free-run extension of `history` by `horizon` steps.
pub fn forecast(model: &ArModel, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(Error::InvalidLength("forecast horizon must be at least 1".into()));
    }
    if history.len() < model.order() {
        return Err(Error::SeriesTooShort {
            len: history.len(),
            required: model.order(),
        });
    }
    let mut buf = history[history.len() - model.order()..].to_vec();
    for _ in 0..horizon {
        let next = model.next_value(&buf);
        buf.push(next);
    }
    Ok(buf.split_off(model.order()))
}

/// Parameters for [`simulate_ar`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub n: usize,
    pub noise_std: f64,
    pub seed: u64,
    pub warmup: usize,
    /// Pre-sample history, oldest first. Missing leading values are zero.
    #[serde(default)]
    pub initial: Vec<f64>,
}

impl SimulationSpec {
    pub fn new(n: usize, noise_std: f64, seed: u64) -> Self {
        Self {
            n,
            noise_std,
            seed,
            warmup: 0,
            initial: Vec::new(),
        }
    }

    pub fn warmup(mut self, warmup: usize) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn initial(mut self, initial: Vec<f64>) -> Self {
        self.initial = initial;
        self
    }
}

/// Draws a realization of `model` driven by Gaussian noise.
///
/// The noise stream is ChaCha8 seeded with `seed_from_u64(seed)` and mapped
/// through `rand_distr::StandardNormal`, so output is bit-reproducible for a
/// given seed on a given platform.
pub fn simulate_ar(model: &ArModel, spec: &SimulationSpec) -> Result<TimeSeries> {
    if spec.n == 0 {
        return Err(Error::InvalidLength("n must be at least 1".into()));
    }
    if !(spec.noise_std >= 0.0) || !spec.noise_std.is_finite() {
        return Err(Error::InvalidModel(format!(
            "noise_std {} must be finite and nonnegative",
            spec.noise_std
        )));
    }
    if spec.initial.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidModel("non-finite initial value".into()));
    }
    let order = model.order();
    let mut history = vec![0.0; order.saturating_sub(spec.initial.len())];
    let keep = spec.initial.len().saturating_sub(order);
    history.extend_from_slice(&spec.initial[keep..]);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total = spec.warmup + spec.n;
    history.reserve(total);
    for _ in 0..total {
        let z: f64 = StandardNormal.sample(&mut rng);
        let next = model.next_value(&history) + spec.noise_std * z;
        history.push(next);
    }
    let values = history.split_off(order + spec.warmup);
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample { index });
    }
    TimeSeries::new(values)
}
