//! Classical AR parameter estimators used as baselines.

mod lattice;
mod least_squares;
mod yule_walker;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use lattice::{fit_geometric_lattice, geometric_reflection, lattice_reflections};
pub use least_squares::{fit_forward_backward, fit_least_squares};
pub use yule_walker::{autocovariance, fit_yule_walker, levinson_durbin, Autocovariance, Levinson};

use crate::error::{Error, Result};
use crate::series::{ArModel, TimeSeries};

/// Diagonal entries of R below this fraction of the largest one mark the
/// design as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimatorKind {
    #[serde(rename = "LS", alias = "ls")]
    LeastSquares,
    #[serde(rename = "FB", alias = "fb")]
    ForwardBackward,
    #[serde(rename = "YW", alias = "yw")]
    YuleWalker,
    #[serde(rename = "GL", alias = "gl")]
    GeometricLattice,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::LeastSquares,
        EstimatorKind::ForwardBackward,
        EstimatorKind::YuleWalker,
        EstimatorKind::GeometricLattice,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EstimatorKind::LeastSquares => "LS",
            EstimatorKind::ForwardBackward => "FB",
            EstimatorKind::YuleWalker => "YW",
            EstimatorKind::GeometricLattice => "GL",
        }
    }

    pub fn fit(self, series: &TimeSeries, order: usize) -> Result<ArModel> {
        match self {
            EstimatorKind::LeastSquares => fit_least_squares(series, order),
            EstimatorKind::ForwardBackward => fit_forward_backward(series, order),
            EstimatorKind::YuleWalker => fit_yule_walker(series, order),
            EstimatorKind::GeometricLattice => fit_geometric_lattice(series, order),
        }
    }
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "LS" => Ok(EstimatorKind::LeastSquares),
            "FB" => Ok(EstimatorKind::ForwardBackward),
            "YW" => Ok(EstimatorKind::YuleWalker),
            "GL" => Ok(EstimatorKind::GeometricLattice),
            _ => Err(format!("unknown estimator '{s}' (expected LS, FB, YW or GL)")),
        }
    }
}

/// Minimum-norm-residual solution of `design * x = target` via Householder QR.
pub(crate) fn solve_least_squares(design: DMatrix<f64>, target: DVector<f64>) -> Result<DVector<f64>> {
    let cols = design.ncols();
    if cols == 0 {
        return Ok(DVector::zeros(0));
    }
    if design.nrows() < cols {
        return Err(Error::SingularDesign);
    }
    let qr = design.qr();
    let r = qr.r();
    let largest = r.diagonal().iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if largest == 0.0 || r.diagonal().iter().any(|d| d.abs() < SINGULARITY_THRESHOLD * largest) {
        return Err(Error::SingularDesign);
    }
    let qt_b = qr.q().transpose() * target;
    r.solve_upper_triangular(&qt_b).ok_or(Error::SingularDesign)
}

pub(crate) fn require_len(series: &TimeSeries, required: usize) -> Result<()> {
    if series.len() < required {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            required,
        });
    }
    Ok(())
}
