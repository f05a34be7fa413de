use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, OrderSpec, OutputFormat};
use super::io::{load_csv, series_to_csv};
use super::CliError;
use crate::metrics::{build_comparison, ComparisonOptions, ComparisonOutcome, Method};
use crate::selection::{select_order, AicCurve};
use crate::series::{forecast, simulate_ar, ArModel, SimulationSpec, TimeSeries};

/// Everything needed to rerun a command: the resolved configuration plus
/// what the run derived from it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub samples: usize,
    pub order: Option<usize>,
    pub pso_seeds: Vec<u64>,
    pub wall_clock_ms: u128,
}

impl Manifest {
    fn new(command: &str, config: &ExperimentConfig, samples: usize, order: Option<usize>, seeds: Vec<u64>, started: Instant) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            samples,
            order,
            pso_seeds: seeds,
            wall_clock_ms: started.elapsed().as_millis(),
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<PathBuf, CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::Data(format!("cannot create {}: {e}", parent.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

fn load_input(config: &ExperimentConfig) -> Result<TimeSeries, CliError> {
    Ok(load_csv(config.input_path()?, &config.column)?)
}

fn pso_seeds(config: &ExperimentConfig) -> Vec<u64> {
    (0..config.pso.runs as u64).map(|r| config.pso.seed.wrapping_add(r)).collect()
}

/// Writes a synthetic AR realization as a single-column CSV.
pub fn cmd_simulate(config: &ExperimentConfig, output: Option<&Path>) -> Result<PathBuf, CliError> {
    let sim = &config.simulate;
    let model = ArModel::new(sim.coefficients.clone(), sim.intercept, sim.noise_std.powi(2))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let spec = SimulationSpec {
        n: sim.n,
        noise_std: sim.noise_std,
        seed: sim.seed,
        warmup: sim.warmup,
        initial: sim.initial.clone(),
    };
    let series = simulate_ar(&model, &spec).map_err(|e| match e {
        crate::Error::NonFiniteSample { .. } => CliError::Numerical(format!("simulation diverged: {e}")),
        other => CliError::Config(other.to_string()),
    })?;
    let path = output
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.output_dir.join("simulated.csv"));
    write(&path, &series_to_csv(series.values()))
}

/// AIC curves for every configured estimator, written as `aic_curve*.csv`.
/// `aic_curve.csv` holds the first estimator's curve.
pub fn cmd_select_order(config: &ExperimentConfig) -> Result<Vec<AicCurve>, CliError> {
    let started = Instant::now();
    config.validate()?;
    if config.rho_max == 0 {
        return Err(CliError::Config("rho_max must be at least 1".into()));
    }
    let series = load_input(config)?;
    let curves = config
        .estimators
        .iter()
        .map(|&kind| select_order(&series, config.rho_max, kind))
        .collect::<Result<Vec<_>, _>>()?;

    let dir = &config.output_dir;
    write(&dir.join("aic_curve.csv"), &curves[0].to_csv())?;
    for curve in &curves {
        write(&dir.join(format!("aic_curve_{}.csv", curve.estimator)), &curve.to_csv())?;
    }
    if config.wants(OutputFormat::Json) {
        write(&dir.join("aic_curves.json"), &to_json(&curves))?;
    }
    let manifest = Manifest::new("select-order", config, series.len(), Some(curves[0].chosen_order), vec![], started);
    write(&dir.join("manifest.json"), &to_json(&manifest))?;
    Ok(curves)
}

fn resolve_order(config: &ExperimentConfig, series: &TimeSeries) -> Result<(usize, Option<AicCurve>), CliError> {
    match config.order {
        OrderSpec::Fixed(order) => Ok((order, None)),
        OrderSpec::Auto => {
            let curve = select_order(series, config.rho_max, config.estimators[0])?;
            Ok((curve.chosen_order, Some(curve)))
        }
    }
}

fn comparison_options(config: &ExperimentConfig, methods: Vec<Method>) -> ComparisonOptions {
    ComparisonOptions {
        methods,
        mode: config.mode,
        pso: config.pso.to_config(1),
        runs: config.pso.runs,
        ls_seeding: config.pso.ls_seeding,
    }
}

#[derive(Debug, Clone)]
pub struct CompareRun {
    pub order: usize,
    pub curve: Option<AicCurve>,
    pub outcome: ComparisonOutcome,
    pub files: Vec<PathBuf>,
}

/// Fits every configured method and writes the report, the best CF-PSO
/// convergence trace, estimated-vs-actual series and the run manifest.
pub fn cmd_compare(config: &ExperimentConfig) -> Result<CompareRun, CliError> {
    let started = Instant::now();
    config.validate()?;
    let series = load_input(config)?;
    let (order, curve) = resolve_order(config, &series)?;
    let outcome = build_comparison(&series, order, &comparison_options(config, config.methods.clone()))?;

    let dir = &config.output_dir;
    let mut files = Vec::new();
    if config.wants(OutputFormat::Json) {
        files.push(write(&dir.join("report.json"), &to_json(&outcome.report))?);
    }
    if config.wants(OutputFormat::Csv) {
        files.push(write(&dir.join("report.csv"), &outcome.report.to_csv())?);
    }
    if let Some(curve) = &curve {
        files.push(write(&dir.join("aic_curve.csv"), &curve.to_csv())?);
    }
    if let Some(best) = &outcome.best_pso {
        let mut trace = String::from("iteration,gbest_rss\n");
        for (i, v) in best.trace.iter().enumerate() {
            trace.push_str(&format!("{i},{v}\n"));
        }
        files.push(write(&dir.join("convergence_trace.csv"), &trace)?);
    }
    files.push(write(&dir.join("estimated_vs_actual.csv"), &estimated_vs_actual(&series, order, &outcome))?);

    let seeds = if config.methods.contains(&Method::CfPso) {
        pso_seeds(config)
    } else {
        Vec::new()
    };
    let manifest = Manifest::new("compare", config, series.len(), Some(order), seeds, started);
    files.push(write(&dir.join("manifest.json"), &to_json(&manifest))?);
    // Individual failures are report rows; a run where nothing fitted is not a success.
    if outcome.fits.is_empty() {
        let reasons: Vec<String> = outcome
            .report
            .failures
            .iter()
            .map(|f| format!("{}: {}", f.method, f.error))
            .collect();
        return Err(CliError::Numerical(format!("every method failed ({})", reasons.join("; "))));
    }
    Ok(CompareRun {
        order,
        curve,
        outcome,
        files,
    })
}

fn estimated_vs_actual(series: &TimeSeries, order: usize, outcome: &ComparisonOutcome) -> String {
    let mut out = String::from("t,actual");
    for fit in &outcome.fits {
        out.push(',');
        out.push_str(fit.method.label());
    }
    out.push('\n');
    for (j, actual) in series.evaluation_span(order).iter().enumerate() {
        out.push_str(&format!("{},{}", order + j, actual));
        for fit in &outcome.fits {
            out.push_str(&format!(",{}", fit.estimated[j]));
        }
        out.push('\n');
    }
    out
}

/// Free-run continuation of the input series by `forecast.horizon` steps.
pub fn cmd_forecast(config: &ExperimentConfig) -> Result<(Vec<f64>, PathBuf), CliError> {
    let started = Instant::now();
    config.validate()?;
    let settings = &config.forecast;
    if settings.horizon == 0 {
        return Err(CliError::Config("forecast horizon must be at least 1".into()));
    }
    let series = load_input(config)?;
    let (model, order) = match &settings.coefficients {
        Some(phi) => {
            let model = ArModel::deterministic(phi.clone(), settings.intercept).map_err(|e| CliError::Config(e.to_string()))?;
            let order = model.order();
            (model, order)
        }
        None => {
            let (order, _) = resolve_order(config, &series)?;
            let outcome = build_comparison(&series, order, &comparison_options(config, vec![settings.method]))?;
            if let Some(failed) = outcome.report.failures.first() {
                return Err(CliError::Numerical(format!("{} fit failed: {}", failed.method, failed.error)));
            }
            let fit = outcome
                .fits
                .into_iter()
                .next()
                .ok_or_else(|| CliError::Numerical("no model was fitted".into()))?;
            (fit.model, order)
        }
    };
    let values = forecast(&model, series.values(), settings.horizon)?;

    let mut csv = String::from("step,forecast\n");
    for (i, v) in values.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", i + 1, v));
    }
    let path = write(&config.output_dir.join("forecast.csv"), &csv)?;
    let seeds = if settings.coefficients.is_none() && settings.method == Method::CfPso {
        pso_seeds(config)
    } else {
        Vec::new()
    };
    let manifest = Manifest::new("forecast", config, series.len(), Some(order), seeds, started);
    write(&config.output_dir.join("manifest.json"), &to_json(&manifest))?;
    Ok((values, path))
}
