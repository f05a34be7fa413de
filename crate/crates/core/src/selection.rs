//! Lag-order selection by Akaike's information criterion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::series::{demean, model_rss, PredictionMode, TimeSeries};

/// `n ln(sigma_hat) + 2 M`.
pub fn aic(sigma_hat: f64, n: usize, params: usize) -> Result<f64> {
    if !(sigma_hat > 0.0) || n == 0 {
        return Err(Error::NonPositiveVariance(sigma_hat));
    }
    Ok(n as f64 * sigma_hat.ln() + 2.0 * params as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AicEntry {
    pub order: usize,
    pub aic: f64,
    pub sigma_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AicCurve {
    pub estimator: EstimatorKind,
    /// One entry per order `1..=rho_max`.
    pub entries: Vec<AicEntry>,
    pub chosen_order: usize,
    /// Order-0 model (sample variance of the demeaned series), reported for
    /// reference only.
    pub reference: Option<AicEntry>,
}

impl AicCurve {
    fn from_entries(estimator: EstimatorKind, entries: Vec<AicEntry>, reference: Option<AicEntry>) -> Self {
        // strict comparison keeps the smaller order on ties
        let chosen_order = entries
            .iter()
            .fold(None::<&AicEntry>, |best, e| match best {
                Some(b) if b.aic <= e.aic => Some(b),
                _ => Some(e),
            })
            .map_or(0, |e| e.order);
        Self {
            estimator,
            entries,
            chosen_order,
            reference,
        }
    }

    /// `order,aic` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("order,aic\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", e.order, e.aic));
        }
        out
    }
}

/// Fits orders `1..=rho_max` with `estimator` and scores each by AIC.
///
/// The error variance is the one-step RSS over `order..n` divided by
/// `n - order`; `n` in the criterion is the series length for every order so
/// the curve entries are comparable.
pub fn select_order(series: &TimeSeries, rho_max: usize, estimator: EstimatorKind) -> Result<AicCurve> {
    if rho_max == 0 {
        return Err(Error::InvalidConfig("rho_max must be at least 1".into()));
    }
    if series.len() <= 2 * rho_max {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            required: 2 * rho_max + 1,
        });
    }
    let n = series.len();
    let entries = (1..=rho_max)
        .map(|order| {
            let model = estimator.fit(series, order)?;
            let rss = model_rss(&model, series, PredictionMode::OneStepAhead)?;
            let sigma_hat = rss / (n - order) as f64;
            Ok(AicEntry {
                order,
                aic: aic(sigma_hat, n, order)?,
                sigma_hat,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (centered, _) = demean(series);
    let variance = centered.values().iter().map(|v| v * v).sum::<f64>() / n as f64;
    let reference = aic(variance, n, 0).ok().map(|aic| AicEntry {
        order: 0,
        aic,
        sigma_hat: variance,
    });
    Ok(AicCurve::from_entries(estimator, entries, reference))
}
