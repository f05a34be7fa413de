use nalgebra::{DMatrix, DVector};

use super::{require_len, solve_least_squares};
use crate::error::{Error, Result};
use crate::series::{demean, model_rss, optimal_intercept, ArModel, PredictionMode, TimeSeries};

/// Ordinary least squares on forward one-step errors.
///
/// The intercept is estimated jointly, so the result is the global minimizer
/// of one-step RSS over `(coefficients, intercept)` on the span `order..n`.
pub fn fit_least_squares(series: &TimeSeries, order: usize) -> Result<ArModel> {
    require_len(series, 2 * order + 1)?;
    let (centered, _) = demean(series);
    let x = centered.values();
    let n = x.len();
    let rows = n - order;

    let mut design = DMatrix::zeros(rows, order);
    let mut target = DVector::zeros(rows);
    for (r, t) in (order..n).enumerate() {
        target[r] = x[t];
        for i in 0..order {
            design[(r, i)] = x[t - 1 - i];
        }
    }
    // column centering absorbs the intercept
    center_columns(&mut design, &mut target);
    let phi: Vec<f64> = solve_least_squares(design, target)?.iter().copied().collect();

    let intercept = optimal_intercept(&phi, series.values(), PredictionMode::OneStepAhead);
    let model = ArModel::deterministic(phi, intercept)?;
    let rss = model_rss(&model, series, PredictionMode::OneStepAhead)?;
    ArModel::new(model.coefficients().to_vec(), intercept, rss / rows as f64)
}

/// Least squares on stacked forward and time-reversed (backward) errors
/// sharing one coefficient vector and one intercept.
pub fn fit_forward_backward(series: &TimeSeries, order: usize) -> Result<ArModel> {
    require_len(series, 2 * order + 1)?;
    let (centered, mean) = demean(series);
    let x = centered.values();
    let n = x.len();
    let rows = n - order;

    let mut design = DMatrix::zeros(2 * rows, order + 1);
    let mut target = DVector::zeros(2 * rows);
    for (r, t) in (order..n).enumerate() {
        target[r] = x[t];
        design[(r, 0)] = 1.0;
        for i in 0..order {
            design[(r, i + 1)] = x[t - 1 - i];
        }
    }
    for (r, s) in (0..rows).enumerate() {
        let row = rows + r;
        target[row] = x[s];
        design[(row, 0)] = 1.0;
        for i in 0..order {
            design[(row, i + 1)] = x[s + 1 + i];
        }
    }
    let sol = solve_least_squares(design.clone(), target.clone())?;
    let residual = &target - &design * &sol;
    let criterion = residual.norm_squared();

    let phi: Vec<f64> = sol.iter().skip(1).copied().collect();
    if phi.is_empty() && series.is_constant() {
        return Err(Error::SingularDesign);
    }
    let intercept = sol[0] + mean * (1.0 - phi.iter().sum::<f64>());
    ArModel::new(phi, intercept, criterion / (2 * rows) as f64)
}

fn center_columns(design: &mut DMatrix<f64>, target: &mut DVector<f64>) {
    let rows = design.nrows() as f64;
    for mut col in design.column_iter_mut() {
        let m = col.sum() / rows;
        col.add_scalar_mut(-m);
    }
    let m = target.sum() / rows;
    target.add_scalar_mut(-m);
}
