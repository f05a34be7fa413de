use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{ExperimentConfig, OrderSpec, OutputFormat};
use super::io::ColumnSelector;
use super::{cmd_compare, cmd_forecast, cmd_select_order, cmd_simulate, CliError};
use crate::estimators::EstimatorKind;
use crate::metrics::Method;
use crate::pso::VelocityRule;
use crate::series::PredictionMode;

#[derive(Debug, Parser)]
#[command(name = "arswarm", version, about = "AR model identification with constriction-factor PSO")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic AR realization as a single-column CSV.
    Simulate(SimulateArgs),
    /// Sweep lag orders 1..=rho_max and pick the AIC minimum.
    SelectOrder(SelectOrderArgs),
    /// Compare LS, FB, YW, GL and CF-PSO fits on one series.
    Compare(CompareArgs),
    /// Extend the series with free-run predictions of a fitted model.
    Forecast(ForecastArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML config file, or a manifest.json from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Header name or 1-based column index.
    #[arg(long)]
    pub column: Option<ColumnSelector>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<PredictionMode>,
}

#[derive(Debug, Args)]
pub struct PsoArgs {
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub swarm_size: Option<usize>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub inertia_weight: Option<f64>,
    #[arg(long, value_parser = parse_rule)]
    pub velocity_rule: Option<VelocityRule>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Relative stall tolerance.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub stall_window: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub lower: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub upper: Option<f64>,
    /// Inject the LS coefficients as one initial particle.
    #[arg(long)]
    pub ls_seeding: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coefficients: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub intercept: Option<f64>,
    #[arg(long)]
    pub noise_std: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub warmup: Option<usize>,
    /// Pre-sample history, oldest first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub initial: Option<Vec<f64>>,
    /// Output file (default: <output-dir>/simulated.csv).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectOrderArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub rho_max: Option<usize>,
    #[arg(long = "estimator", value_delimiter = ',')]
    pub estimators: Option<Vec<EstimatorKind>>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub pso: PsoArgs,
    /// Lag order or "auto".
    #[arg(long)]
    pub order: Option<OrderSpec>,
    #[arg(long)]
    pub rho_max: Option<usize>,
    #[arg(long = "estimator", value_delimiter = ',')]
    pub estimators: Option<Vec<EstimatorKind>>,
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    #[arg(long = "format", value_delimiter = ',', value_parser = parse_format)]
    pub formats: Option<Vec<OutputFormat>>,
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub pso: PsoArgs,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub order: Option<OrderSpec>,
    #[arg(long)]
    pub rho_max: Option<usize>,
    /// Forecast with these coefficients instead of fitting.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coefficients: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub intercept: Option<f64>,
}

fn parse_mode(s: &str) -> Result<PredictionMode, String> {
    match s {
        "one-step-ahead" | "one-step" => Ok(PredictionMode::OneStepAhead),
        "free-run" => Ok(PredictionMode::FreeRun),
        _ => Err(format!("unknown mode '{s}' (one-step-ahead or free-run)")),
    }
}

fn parse_rule(s: &str) -> Result<VelocityRule, String> {
    match s {
        "constriction-factor" | "cf" => Ok(VelocityRule::ConstrictionFactor),
        "inertia-weight" | "iw" => Ok(VelocityRule::InertiaWeight),
        _ => Err(format!("unknown velocity rule '{s}' (constriction-factor or inertia-weight)")),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        _ => Err(format!("unknown format '{s}' (json or csv)")),
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn base_config(common: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if common.input.is_some() {
        config.input = common.input.clone();
    }
    set(&mut config.column, common.column.clone());
    set(&mut config.output_dir, common.output_dir.clone());
    set(&mut config.mode, common.mode);
    Ok(config)
}

fn apply_pso(config: &mut ExperimentConfig, args: &PsoArgs) {
    let pso = &mut config.pso;
    set(&mut pso.runs, args.runs);
    set(&mut pso.seed, args.seed);
    set(&mut pso.swarm_size, args.swarm_size);
    set(&mut pso.c1, args.c1);
    set(&mut pso.c2, args.c2);
    set(&mut pso.inertia_weight, args.inertia_weight);
    set(&mut pso.velocity_rule, args.velocity_rule);
    set(&mut pso.max_iterations, args.max_iterations);
    set(&mut pso.stall_tolerance, args.epsilon);
    set(&mut pso.stall_window, args.stall_window);
    set(&mut pso.lower, args.lower);
    set(&mut pso.upper, args.upper);
    pso.ls_seeding |= args.ls_seeding;
}

/// Merges the config file (if any) with command-line overrides.
pub fn resolve(command: &Command) -> Result<ExperimentConfig, CliError> {
    match command {
        Command::Simulate(a) => {
            let mut c = base_config(&a.common)?;
            let s = &mut c.simulate;
            set(&mut s.coefficients, a.coefficients.clone());
            set(&mut s.intercept, a.intercept);
            set(&mut s.noise_std, a.noise_std);
            set(&mut s.n, a.n);
            set(&mut s.seed, a.seed);
            set(&mut s.warmup, a.warmup);
            set(&mut s.initial, a.initial.clone());
            Ok(c)
        }
        Command::SelectOrder(a) => {
            let mut c = base_config(&a.common)?;
            set(&mut c.rho_max, a.rho_max);
            set(&mut c.estimators, a.estimators.clone());
            c.order = OrderSpec::Auto;
            Ok(c)
        }
        Command::Compare(a) => {
            let mut c = base_config(&a.common)?;
            apply_pso(&mut c, &a.pso);
            set(&mut c.order, a.order);
            set(&mut c.rho_max, a.rho_max);
            set(&mut c.estimators, a.estimators.clone());
            set(&mut c.methods, a.methods.clone());
            set(&mut c.formats, a.formats.clone());
            Ok(c)
        }
        Command::Forecast(a) => {
            let mut c = base_config(&a.common)?;
            apply_pso(&mut c, &a.pso);
            set(&mut c.order, a.order);
            set(&mut c.rho_max, a.rho_max);
            set(&mut c.forecast.horizon, a.horizon);
            set(&mut c.forecast.method, a.method);
            if a.coefficients.is_some() {
                c.forecast.coefficients = a.coefficients.clone();
            }
            set(&mut c.forecast.intercept, a.intercept);
            Ok(c)
        }
    }
}

fn execute(command: &Command) -> Result<(), CliError> {
    let config = resolve(command)?;
    match command {
        Command::Simulate(a) => {
            let path = cmd_simulate(&config, a.output.as_deref())?;
            println!("wrote {} samples to {}", config.simulate.n, path.display());
        }
        Command::SelectOrder(_) => {
            for curve in cmd_select_order(&config)? {
                println!("{}: chosen order {}", curve.estimator, curve.chosen_order);
            }
        }
        Command::Compare(_) => {
            let run = cmd_compare(&config)?;
            if let Some(curve) = &run.curve {
                println!("AIC ({}) chose order {}", curve.estimator, run.order);
            }
            println!(
                "order {} over {} samples ({:?})\n",
                run.order, run.outcome.report.span, run.outcome.report.mode
            );
            print!("{}", run.outcome.report.to_table());
            println!("\nartifacts in {}", config.output_dir.display());
        }
        Command::Forecast(_) => {
            let (values, path) = cmd_forecast(&config)?;
            for (i, v) in values.iter().enumerate() {
                println!("{:>4} {v:.4}", i + 1);
            }
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
