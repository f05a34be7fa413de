use super::require_len;
use crate::error::{Error, Result};
use crate::series::{demean, ArModel, TimeSeries};

/// Error energies at or below this fraction of the initial energy end the
/// lattice recursion.
const ENERGY_FLOOR: f64 = 1e-28;

/// Reflection coefficient with the geometric mean of the forward and
/// backward error energies in the denominator. `forward[t]` pairs with
/// `backward[t]`, which is already delayed by one sample.
pub fn geometric_reflection(forward: &[f64], backward: &[f64]) -> f64 {
    let cross: f64 = forward.iter().zip(backward).map(|(f, b)| f * b).sum();
    let ef: f64 = forward.iter().map(|f| f * f).sum();
    let eb: f64 = backward.iter().map(|b| b * b).sum();
    let k = cross / (ef * eb).sqrt();
    // rounding can push |k| a hair past 1
    k.clamp(-1.0, 1.0)
}

/// Reflection coefficients of the geometric lattice on `values`
/// (assumed demeaned). Stops early when the error energy is exhausted.
pub fn lattice_reflections(values: &[f64], order: usize) -> Vec<f64> {
    let n = values.len();
    let mut f = values.to_vec();
    let mut b = values.to_vec();
    let initial: f64 = values.iter().map(|v| v * v).sum();
    let mut out = Vec::with_capacity(order);
    for m in 1..=order.min(n.saturating_sub(1)) {
        let ef: f64 = f[m..].iter().map(|v| v * v).sum();
        let eb: f64 = b[m - 1..n - 1].iter().map(|v| v * v).sum();
        if ef <= ENERGY_FLOOR * initial || eb <= ENERGY_FLOOR * initial {
            break;
        }
        let k = geometric_reflection(&f[m..], &b[m - 1..n - 1]);
        for t in (m..n).rev() {
            let (ft, bt) = (f[t], b[t - 1]);
            f[t] = ft - k * bt;
            b[t] = bt - k * ft;
        }
        out.push(k);
    }
    out
}

/// Geometric-lattice estimate on the demeaned series.
///
/// Coefficients are assembled from the reflection coefficients by the
/// Levinson step-up recursion. When the error energy is exhausted before
/// `order` stages the model fitted so far is padded with zero coefficients.
pub fn fit_geometric_lattice(series: &TimeSeries, order: usize) -> Result<ArModel> {
    require_len(series, order + 2)?;
    if series.is_constant() {
        return Err(Error::ConstantSeries);
    }
    let (centered, mean) = demean(series);
    let x = centered.values();
    let reflections = lattice_reflections(x, order);

    let mut power = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
    let mut phi: Vec<f64> = Vec::with_capacity(order);
    for (m, &k) in reflections.iter().enumerate() {
        let prev = phi.clone();
        for i in 0..m {
            phi[i] = prev[i] - k * prev[m - 1 - i];
        }
        phi.push(k);
        power *= 1.0 - k * k;
    }
    phi.resize(order, 0.0);
    let intercept = mean * (1.0 - phi.iter().sum::<f64>());
    ArModel::new(phi, intercept, power.max(0.0))
}
