use serde::{Deserialize, Serialize};

use super::{optimize, PsoConfig, Termination};
use crate::error::{Error, Result};
use crate::series::{model_rss, optimal_intercept, ArModel, PredictionMode, TimeSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ArModel,
    /// Final RSS; equal to the last entry of `trace`.
    pub objective_value: f64,
    pub trace: Vec<f64>,
    pub iterations_used: usize,
    pub termination: Termination,
}

/// RSS of the coefficient vector `theta` on `series`, with the intercept set
/// to its RSS-optimal value for `theta`. Diverging predictions map to
/// `f64::MAX` so explosive candidates are merely bad, not fatal.
pub fn ar_objective<'a>(series: &'a TimeSeries, mode: PredictionMode) -> impl Fn(&[f64]) -> f64 + Sync + 'a {
    move |theta: &[f64]| {
        let intercept = optimal_intercept(theta, series.values(), mode);
        let rss = ArModel::deterministic(theta.to_vec(), intercept)
            .and_then(|model| model_rss(&model, series, mode));
        match rss {
            Ok(v) if v.is_finite() => v,
            _ => f64::MAX,
        }
    }
}

/// Fits AR(`order`) coefficients by minimizing the RSS of `mode` predictions
/// with the configured swarm.
pub fn fit_ar_cfpso(
    series: &TimeSeries,
    order: usize,
    config: &PsoConfig,
    mode: PredictionMode,
) -> Result<FitResult> {
    if series.len() < 2 * order + 1 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            required: 2 * order + 1,
        });
    }
    if config.dimension != order {
        return Err(Error::InvalidConfig(format!(
            "swarm dimension {} does not match AR order {order}",
            config.dimension
        )));
    }
    let objective = ar_objective(series, mode);
    let optimum = optimize(config, &objective)?;

    let coefficients = optimum.best_position;
    let intercept = optimal_intercept(&coefficients, series.values(), mode);
    let span = (series.len() - order) as f64;
    let model = ArModel::new(coefficients, intercept, optimum.best_value / span)?;
    Ok(FitResult {
        model,
        objective_value: optimum.best_value,
        trace: optimum.trace,
        iterations_used: optimum.iterations,
        termination: optimum.termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::fit_least_squares;
    use crate::series::{simulate_ar, SimulationSpec};

    #[test]
    fn noiseless_ar1_recovered() {
        let mut v = vec![1.0];
        for _ in 1..50 {
            let last = *v.last().unwrap();
            v.push(0.7 * last);
        }
        let s = TimeSeries::new(v).unwrap();
        let config = PsoConfig::new(1).with_bounds(-1.0, 1.0).with_seed(5);
        let fit = fit_ar_cfpso(&s, 1, &config, PredictionMode::OneStepAhead).unwrap();
        assert!((fit.model.coefficients()[0] - 0.7).abs() < 1e-3, "{:?}", fit.model);
        assert_eq!(fit.objective_value, *fit.trace.last().unwrap());
    }

    #[test]
    fn ls_seeding_never_worse_than_ls() {
        let truth = ArModel::deterministic(vec![0.6, -0.3], 1.0).unwrap();
        let s = simulate_ar(&truth, &SimulationSpec::new(512, 1.0, 21).warmup(100)).unwrap();
        let ls = fit_least_squares(&s, 2).unwrap();
        let ls_rss = model_rss(&ls, &s, PredictionMode::OneStepAhead).unwrap();
        for seed in 0..5 {
            let config = PsoConfig::new(2)
                .with_seed(seed)
                .with_seed_positions(vec![ls.coefficients().to_vec()]);
            let fit = fit_ar_cfpso(&s, 2, &config, PredictionMode::OneStepAhead).unwrap();
            assert!(fit.objective_value <= ls_rss);
        }
    }

    #[test]
    fn dimension_must_match_order() {
        let s = TimeSeries::new((0..20).map(|i| (i as f64).sin()).collect()).unwrap();
        let err = fit_ar_cfpso(&s, 2, &PsoConfig::new(3), PredictionMode::OneStepAhead);
        assert!(matches!(err, Err(Error::InvalidConfig(_))));
        let err = fit_ar_cfpso(&s, 10, &PsoConfig::new(10), PredictionMode::OneStepAhead);
        assert!(matches!(err, Err(Error::SeriesTooShort { .. })));
    }

    #[test]
    fn free_run_objective_survives_explosive_candidates() {
        let s = TimeSeries::new((0..400).map(|i| (i as f64 * 0.3).sin() * 5.0).collect()).unwrap();
        let f = ar_objective(&s, PredictionMode::FreeRun);
        assert_eq!(f(&[2.0, 2.0]), f64::MAX);
        let fit = fit_ar_cfpso(&s, 2, &PsoConfig::new(2).with_seed(1), PredictionMode::FreeRun).unwrap();
        assert!(fit.objective_value.is_finite());
    }
}
