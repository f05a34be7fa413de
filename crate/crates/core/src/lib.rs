//! Autoregressive model identification for sampled power and sensor data.
//!
//! AR coefficients are fitted by a bounded constriction-factor particle swarm
//! minimizing the residual sum of squares, and compared against least
//! squares, forward-backward, Yule-Walker and geometric-lattice estimates.
//! Lag order is chosen by AIC and fits are scored by MSE, FPE, NMSE and the
//! percentage improvement over least squares.
//!
//! ```
//! use arswarm::estimators::fit_least_squares;
//! use arswarm::pso::{fit_ar_cfpso, PsoConfig};
//! use arswarm::series::{simulate_ar, ArModel, PredictionMode, SimulationSpec};
//!
//! let truth = ArModel::deterministic(vec![0.6, -0.3], 0.0).unwrap();
//! let series = simulate_ar(&truth, &SimulationSpec::new(1024, 1.0, 7).warmup(200)).unwrap();
//! let ls = fit_least_squares(&series, 2).unwrap();
//! let fit = fit_ar_cfpso(&series, 2, &PsoConfig::new(2).with_seed(1), PredictionMode::OneStepAhead).unwrap();
//! assert!((fit.model.coefficients()[0] - ls.coefficients()[0]).abs() < 0.05);
//! ```

// Validation is written as `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod error;
pub mod estimators;
pub mod metrics;
pub mod pso;
pub mod selection;
pub mod series;

pub use error::{Error, Result};
