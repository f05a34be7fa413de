use crate::error::{Error, Result};
use crate::series::{demean, ArModel, TimeSeries};

/// Biased sample autocovariances `r[k] = (1/n) sum_t x_t x_{t+k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Autocovariance {
    pub lags: Vec<f64>,
}

/// Autocovariance of an already demeaned series up to `max_lag`.
pub fn autocovariance(series: &TimeSeries, max_lag: usize) -> Result<Autocovariance> {
    let x = series.values();
    let n = x.len();
    if max_lag >= n {
        return Err(Error::LagTooLarge { max_lag, len: n });
    }
    let lags: Vec<f64> = (0..=max_lag)
        .map(|k| x[..n - k].iter().zip(&x[k..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect();
    if lags[0] <= 0.0 {
        return Err(Error::ConstantSeries);
    }
    Ok(Autocovariance { lags })
}

/// Output of the Levinson-Durbin recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct Levinson {
    /// Prediction coefficients, `x_t ~ sum_i coefficients[i] x_{t-1-i}`.
    pub coefficients: Vec<f64>,
    pub reflection: Vec<f64>,
    /// Final prediction-error power.
    pub error_power: f64,
}

/// Solves the order-`order` Toeplitz normal equations built from `acf`.
pub fn levinson_durbin(acf: &[f64], order: usize) -> Result<Levinson> {
    if acf.len() <= order {
        return Err(Error::LagTooLarge {
            max_lag: order,
            len: acf.len(),
        });
    }
    if acf[0] <= 0.0 {
        return Err(Error::ConstantSeries);
    }
    let mut phi: Vec<f64> = Vec::with_capacity(order);
    let mut reflection = Vec::with_capacity(order);
    let mut error = acf[0];
    for m in 1..=order {
        if error <= 0.0 {
            return Err(Error::NumericallySingular { stage: m });
        }
        let acc: f64 = phi.iter().enumerate().map(|(i, p)| p * acf[m - 1 - i]).sum();
        let k = (acf[m] - acc) / error;
        let prev = phi.clone();
        for i in 0..phi.len() {
            phi[i] = prev[i] - k * prev[m - 2 - i];
        }
        phi.push(k);
        reflection.push(k);
        error *= 1.0 - k * k;
    }
    Ok(Levinson {
        coefficients: phi,
        reflection,
        error_power: error.max(0.0),
    })
}

/// Yule-Walker estimate on the demeaned series, intercept `mean * (1 - sum phi)`.
pub fn fit_yule_walker(series: &TimeSeries, order: usize) -> Result<ArModel> {
    super::require_len(series, order + 2)?;
    if series.is_constant() {
        return Err(Error::ConstantSeries);
    }
    let (centered, mean) = demean(series);
    let acf = autocovariance(&centered, order)?;
    let sol = levinson_durbin(&acf.lags, order)?;
    let intercept = mean * (1.0 - sol.coefficients.iter().sum::<f64>());
    ArModel::new(sol.coefficients, intercept, sol.error_power)
}
