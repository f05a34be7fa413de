//! Evaluation indices and the five-method comparison table.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{fit_least_squares, EstimatorKind};
use crate::pso::{fit_ar_cfpso, FitResult, PsoConfig};
use crate::series::{predict, residual_sum_of_squares, ArModel, PredictionMode, TimeSeries};

fn check_pair(actual: &[f64], estimated: &[f64]) -> Result<()> {
    if actual.len() != estimated.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: estimated.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// Mean square error.
pub fn mse(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    check_pair(actual, estimated)?;
    Ok(residual_sum_of_squares(actual, estimated)? / actual.len() as f64)
}

/// Akaike's final prediction error `loss (1 + h/H) / (1 - h/H)`.
pub fn fpe(loss: f64, h: usize, big_h: usize) -> Result<f64> {
    if h >= big_h {
        return Err(Error::DegenerateRatio { h, big_h });
    }
    if !(loss >= 0.0) {
        return Err(Error::NonPositiveVariance(loss));
    }
    let ratio = h as f64 / big_h as f64;
    Ok(loss * (1.0 + ratio) / (1.0 - ratio))
}

/// `sum (Y - Yhat)^2 / (delta^2 n)` with `delta^2` the unbiased sample
/// variance of `actual`. Zero for a perfect fit.
pub fn nmse_raw(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    check_pair(actual, estimated)?;
    let n = actual.len();
    if n < 2 {
        return Err(Error::InvalidLength("NMSE needs at least two samples".into()));
    }
    let mean = actual.iter().sum::<f64>() / n as f64;
    let spread: f64 = actual.iter().map(|y| (y - mean) * (y - mean)).sum();
    if !(spread > 0.0) {
        return Err(Error::ConstantActual);
    }
    let delta2 = spread / (n - 1) as f64;
    Ok(residual_sum_of_squares(actual, estimated)? / (delta2 * n as f64))
}

/// Goodness of fit `1 - nmse_raw`: 1 for a perfect fit, unbounded below.
pub fn nmse(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    Ok(1.0 - nmse_raw(actual, estimated)?)
}

/// Percentage error reduction relative to the least-squares baseline.
pub fn emp(error_ls: f64, error: f64) -> Result<f64> {
    if !(error_ls > 0.0) {
        return Err(Error::NonPositiveBaseline(error_ls));
    }
    Ok((error_ls - error) / error_ls * 100.0)
}

/// Row label of the comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "LS")]
    Ls,
    #[serde(rename = "FB")]
    Fb,
    #[serde(rename = "YW")]
    Yw,
    #[serde(rename = "GL")]
    Gl,
    #[serde(rename = "CF-PSO")]
    CfPso,
}

impl Method {
    /// Table order.
    pub const ALL: [Method; 5] = [Method::Ls, Method::Fb, Method::Yw, Method::Gl, Method::CfPso];

    pub fn label(self) -> &'static str {
        match self {
            Method::Ls => "LS",
            Method::Fb => "FB",
            Method::Yw => "YW",
            Method::Gl => "GL",
            Method::CfPso => "CF-PSO",
        }
    }

    pub fn estimator(self) -> Option<EstimatorKind> {
        match self {
            Method::Ls => Some(EstimatorKind::LeastSquares),
            Method::Fb => Some(EstimatorKind::ForwardBackward),
            Method::Yw => Some(EstimatorKind::YuleWalker),
            Method::Gl => Some(EstimatorKind::GeometricLattice),
            Method::CfPso => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('_', "-").as_str() {
            "CF-PSO" | "CFPSO" | "PSO" => Ok(Method::CfPso),
            other => other
                .parse::<EstimatorKind>()
                .map(|k| match k {
                    EstimatorKind::LeastSquares => Method::Ls,
                    EstimatorKind::ForwardBackward => Method::Fb,
                    EstimatorKind::YuleWalker => Method::Yw,
                    EstimatorKind::GeometricLattice => Method::Gl,
                }),
        }
    }
}

/// One row of the comparison table. Field order follows the printed table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub method: Method,
    pub mse: f64,
    pub emp_mse_pct: Option<f64>,
    pub fpe: f64,
    pub emp_fpe_pct: Option<f64>,
    pub nmse: f64,
    pub nmse_raw: f64,
    pub runs: usize,
    /// Sample standard deviation of MSE across runs (CF-PSO only).
    pub std_mse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedRow {
    pub method: Method,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub order: usize,
    pub mode: PredictionMode,
    /// Length `H` of the common evaluation span.
    pub span: usize,
    pub rows: Vec<MetricsReport>,
    pub failures: Vec<FailedRow>,
}

impl ComparisonReport {
    pub fn row(&self, method: Method) -> Option<&MetricsReport> {
        self.rows.iter().find(|r| r.method == method)
    }

    /// CSV table `Method,MSE,EMP_MSE,FPE,EMP_FPE,NMSE,...` at full precision.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("Method,MSE,EMP_MSE,FPE,EMP_FPE,NMSE,NMSE_RAW,runs,std_mse,error\n");
        for method in Method::ALL {
            if let Some(r) = self.row(method) {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},\n",
                    r.method,
                    r.mse,
                    opt(r.emp_mse_pct),
                    r.fpe,
                    opt(r.emp_fpe_pct),
                    r.nmse,
                    r.nmse_raw,
                    r.runs,
                    opt(r.std_mse)
                ));
            } else if let Some(f) = self.failures.iter().find(|f| f.method == method) {
                out.push_str(&format!("{},,,,,,,0,,\"{}\"\n", f.method, f.error.replace('"', "'")));
            }
        }
        out
    }

    /// Human-readable table rounded to four decimals.
    pub fn to_table(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:+.4}")).unwrap_or_else(|| "-".into());
        let mut out = format!(
            "{:<8}{:>14}{:>12}{:>14}{:>12}{:>10}\n",
            "Method", "MSE", "EMP_MSE(%)", "FPE", "EMP_FPE(%)", "NMSE"
        );
        for method in Method::ALL {
            if let Some(r) = self.row(method) {
                out.push_str(&format!(
                    "{:<8}{:>14.4}{:>12}{:>14.4}{:>12}{:>10.4}\n",
                    r.method.label(),
                    r.mse,
                    opt(r.emp_mse_pct),
                    r.fpe,
                    opt(r.emp_fpe_pct),
                    r.nmse
                ));
            } else if let Some(f) = self.failures.iter().find(|f| f.method == method) {
                out.push_str(&format!("{:<8}failed: {}\n", f.method.label(), f.error));
            }
        }
        out
    }
}

/// Settings for [`build_comparison`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonOptions {
    pub methods: Vec<Method>,
    pub mode: PredictionMode,
    /// Swarm settings; dimension and seed positions are set per run.
    pub pso: PsoConfig,
    /// Independent CF-PSO restarts; run `r` uses seed `pso.rng_seed + r`.
    pub runs: usize,
    /// Inject the LS coefficients as one initial particle.
    pub ls_seeding: bool,
}

impl Default for ComparisonOptions {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            mode: PredictionMode::OneStepAhead,
            pso: PsoConfig::new(1),
            runs: 30,
            ls_seeding: false,
        }
    }
}

/// Fitted model and its estimated data on the evaluation span.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodFit {
    pub method: Method,
    pub model: ArModel,
    pub estimated: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonOutcome {
    pub report: ComparisonReport,
    pub fits: Vec<MethodFit>,
    /// Lowest-RSS CF-PSO run.
    pub best_pso: Option<FitResult>,
    /// Final RSS of every CF-PSO run, in run order.
    pub pso_run_rss: Vec<f64>,
}

struct Scores {
    mse: f64,
    fpe: f64,
    nmse: f64,
    nmse_raw: f64,
}

fn score(model: &ArModel, series: &TimeSeries, mode: PredictionMode) -> Result<(Scores, Vec<f64>)> {
    let order = model.order();
    let estimated = predict(model, series, mode)?;
    let actual = series.evaluation_span(order);
    let span = actual.len();
    let rss = residual_sum_of_squares(actual, &estimated)?;
    let scores = Scores {
        mse: mse(actual, &estimated)?,
        fpe: fpe(rss / span as f64, order, span)?,
        nmse: nmse(actual, &estimated)?,
        nmse_raw: nmse_raw(actual, &estimated)?,
    };
    Ok((scores, estimated))
}

/// Fits every requested method at `order` and scores them on the common
/// span `order..n`. A failing method becomes a [`FailedRow`].
pub fn build_comparison(series: &TimeSeries, order: usize, options: &ComparisonOptions) -> Result<ComparisonOutcome> {
    if order == 0 {
        return Err(Error::InvalidConfig("AR order must be at least 1".into()));
    }
    if series.len() < 2 * order + 1 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            required: 2 * order + 1,
        });
    }
    let mode = options.mode;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut fits = Vec::new();
    let mut best_pso = None;
    let mut pso_run_rss = Vec::new();

    let ls_model = fit_least_squares(series, order);

    for &method in &Method::ALL {
        if !options.methods.contains(&method) {
            continue;
        }
        let outcome = match method.estimator() {
            Some(kind) => {
                let model = if kind == EstimatorKind::LeastSquares {
                    ls_model.clone()
                } else {
                    kind.fit(series, order)
                };
                model.and_then(|model| {
                    let (s, estimated) = score(&model, series, mode)?;
                    fits.push(MethodFit {
                        method,
                        model,
                        estimated,
                    });
                    Ok((s, 1, None))
                })
            }
            None => run_cfpso(series, order, options, ls_model.as_ref().ok()).and_then(|runs| {
                let scored = runs
                    .iter()
                    .map(|fit| score(&fit.model, series, mode))
                    .collect::<Result<Vec<_>>>()?;
                let count = scored.len() as f64;
                let mean = |f: fn(&Scores) -> f64| scored.iter().map(|(s, _)| f(s)).sum::<f64>() / count;
                let mean_mse = mean(|s| s.mse);
                let var = if scored.len() > 1 {
                    scored.iter().map(|(s, _)| (s.mse - mean_mse).powi(2)).sum::<f64>() / (count - 1.0)
                } else {
                    0.0
                };
                let agg = Scores {
                    mse: mean_mse,
                    fpe: mean(|s| s.fpe),
                    nmse: mean(|s| s.nmse),
                    nmse_raw: mean(|s| s.nmse_raw),
                };
                pso_run_rss = runs.iter().map(|f| f.objective_value).collect();
                let best = runs
                    .iter()
                    .enumerate()
                    .fold(0, |b, (i, f)| if f.objective_value < runs[b].objective_value { i } else { b });
                fits.push(MethodFit {
                    method,
                    model: runs[best].model.clone(),
                    estimated: scored[best].1.clone(),
                });
                best_pso = Some(runs[best].clone());
                Ok((agg, runs.len(), Some(var.sqrt())))
            }),
        };
        match outcome {
            Ok((s, runs, std_mse)) => rows.push(MetricsReport {
                method,
                mse: s.mse,
                emp_mse_pct: None,
                fpe: s.fpe,
                emp_fpe_pct: None,
                nmse: s.nmse,
                nmse_raw: s.nmse_raw,
                runs,
                std_mse,
            }),
            Err(e) => failures.push(FailedRow {
                method,
                error: e.to_string(),
            }),
        }
    }

    if let Some(ls) = rows.iter().find(|r| r.method == Method::Ls).cloned() {
        for row in &mut rows {
            row.emp_mse_pct = emp(ls.mse, row.mse).ok();
            row.emp_fpe_pct = emp(ls.fpe, row.fpe).ok();
        }
    }

    Ok(ComparisonOutcome {
        report: ComparisonReport {
            order,
            mode,
            span: series.len() - order,
            rows,
            failures,
        },
        fits,
        best_pso,
        pso_run_rss,
    })
}

fn run_cfpso(
    series: &TimeSeries,
    order: usize,
    options: &ComparisonOptions,
    ls_model: Option<&ArModel>,
) -> Result<Vec<FitResult>> {
    if options.runs == 0 {
        return Err(Error::InvalidConfig("CF-PSO needs at least one run".into()));
    }
    let mut base = options.pso.resized(order);
    if options.ls_seeding {
        let ls = ls_model.ok_or_else(|| Error::InvalidConfig("LS seeding requested but LS fit failed".into()))?;
        let mut seed = ls.coefficients().to_vec();
        base.bounds.clamp(&mut seed);
        base.seed_positions = vec![seed];
    }
    (0..options.runs)
        .into_par_iter()
        .map(|r| {
            let config = base.clone().with_seed(base.rng_seed.wrapping_add(r as u64));
            fit_ar_cfpso(series, order, &config, options.mode)
        })
        .collect()
}
