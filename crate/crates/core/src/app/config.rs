//! Declarative experiment configuration (TOML) shared by all subcommands.
//!
//! ```toml
//! input = "data/week1.csv"
//! column = "mw"            # header name or 1-based index
//! order = "auto"           # or an explicit lag order
//! rho_max = 10
//! mode = "one-step-ahead"  # or "free-run"
//! output_dir = "out"
//! formats = ["json", "csv"]
//!
//! [pso]
//! runs = 30
//! seed = 0
//! ls_seeding = false
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::io::ColumnSelector;
use super::CliError;
use crate::estimators::EstimatorKind;
use crate::metrics::Method;
use crate::pso::{Bounds, PsoConfig, VelocityRule};
use crate::series::PredictionMode;

/// Explicit lag order or AIC selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderSpec {
    #[default]
    Auto,
    Fixed(usize),
}

impl FromStr for OrderSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(OrderSpec::Auto);
        }
        s.parse::<usize>()
            .map(OrderSpec::Fixed)
            .map_err(|_| format!("order must be 'auto' or a nonnegative integer, got '{s}'"))
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Auto => f.write_str("auto"),
            OrderSpec::Fixed(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for OrderSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            OrderSpec::Auto => serializer.serialize_str("auto"),
            OrderSpec::Fixed(p) => serializer.serialize_u64(*p as u64),
        }
    }
}

impl<'de> Deserialize<'de> for OrderSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(p) => Ok(OrderSpec::Fixed(p as usize)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoSettings {
    pub swarm_size: usize,
    pub c1: f64,
    pub c2: f64,
    pub inertia_weight: f64,
    pub velocity_rule: VelocityRule,
    pub max_iterations: usize,
    pub stall_tolerance: f64,
    pub stall_window: usize,
    pub lower: f64,
    pub upper: f64,
    pub runs: usize,
    pub seed: u64,
    pub ls_seeding: bool,
}

impl Default for PsoSettings {
    fn default() -> Self {
        let base = PsoConfig::new(1);
        Self {
            swarm_size: base.swarm_size,
            c1: base.c1,
            c2: base.c2,
            inertia_weight: base.inertia_weight,
            velocity_rule: base.velocity_rule,
            max_iterations: base.max_iterations,
            stall_tolerance: base.stall_tolerance,
            stall_window: base.stall_window,
            lower: -PsoConfig::DEFAULT_AR_BOUND,
            upper: PsoConfig::DEFAULT_AR_BOUND,
            runs: 30,
            seed: 0,
            ls_seeding: false,
        }
    }
}

impl PsoSettings {
    pub fn to_config(&self, dimension: usize) -> PsoConfig {
        PsoConfig {
            dimension,
            swarm_size: self.swarm_size,
            c1: self.c1,
            c2: self.c2,
            inertia_weight: self.inertia_weight,
            velocity_rule: self.velocity_rule,
            max_iterations: self.max_iterations,
            stall_tolerance: self.stall_tolerance,
            stall_window: self.stall_window,
            bounds: Bounds::uniform(dimension, self.lower, self.upper),
            rng_seed: self.seed,
            seed_positions: Vec::new(),
        }
    }
}

/// Model for `simulate`, and optionally an explicit model for `forecast`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSettings {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub noise_std: f64,
    pub n: usize,
    pub seed: u64,
    pub warmup: usize,
    pub initial: Vec<f64>,
}

impl Default for SimulateSettings {
    fn default() -> Self {
        Self {
            coefficients: vec![0.6, -0.3],
            intercept: 0.0,
            noise_std: 1.0,
            n: 2048,
            seed: 7,
            warmup: 500,
            initial: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForecastSettings {
    pub horizon: usize,
    pub method: Method,
    /// Use these coefficients instead of fitting.
    pub coefficients: Option<Vec<f64>>,
    pub intercept: f64,
}

impl Default for ForecastSettings {
    fn default() -> Self {
        Self {
            horizon: 12,
            method: Method::CfPso,
            coefficients: None,
            intercept: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub input: Option<PathBuf>,
    pub column: ColumnSelector,
    pub order: OrderSpec,
    pub rho_max: usize,
    /// Estimators swept by `select-order`; the first also picks the order
    /// for `compare` and `forecast` when `order = "auto"`.
    pub estimators: Vec<EstimatorKind>,
    pub methods: Vec<Method>,
    pub mode: PredictionMode,
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub pso: PsoSettings,
    pub simulate: SimulateSettings,
    pub forecast: ForecastSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            input: None,
            column: ColumnSelector::default(),
            order: OrderSpec::Auto,
            rho_max: 10,
            estimators: EstimatorKind::ALL.to_vec(),
            methods: Method::ALL.to_vec(),
            mode: PredictionMode::OneStepAhead,
            output_dir: PathBuf::from("out"),
            formats: vec![OutputFormat::Json, OutputFormat::Csv],
            pso: PsoSettings::default(),
            simulate: SimulateSettings::default(),
            forecast: ForecastSettings::default(),
        }
    }
}

impl ExperimentConfig {
    /// Reads a TOML config, or the `config` section of a JSON run manifest.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            #[derive(Deserialize)]
            struct ManifestConfig {
                config: ExperimentConfig,
            }
            serde_json::from_str::<ManifestConfig>(&text)
                .map(|m| m.config)
                .map_err(|e| CliError::Config(format!("invalid manifest {}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self.order {
            OrderSpec::Auto if self.rho_max == 0 => {
                return Err(CliError::Config("order \"auto\" requires rho_max >= 1".into()))
            }
            OrderSpec::Fixed(0) => return Err(CliError::Config("explicit order must be at least 1".into())),
            _ => {}
        }
        if self.estimators.is_empty() {
            return Err(CliError::Config("at least one estimator is required".into()));
        }
        if self.methods.is_empty() {
            return Err(CliError::Config("at least one method is required".into()));
        }
        if self.pso.runs == 0 {
            return Err(CliError::Config("pso.runs must be at least 1".into()));
        }
        self.pso
            .to_config(1)
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }

    pub fn input_path(&self) -> Result<&Path, CliError> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Config("no input file given (--input or `input` in the config)".into()))
    }
}
