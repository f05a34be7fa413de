//! Bounded particle swarm optimization with inertia-weight and
//! constriction-factor velocity rules.

mod ar_fit;
mod swarm;

use serde::{Deserialize, Serialize};

pub use ar_fit::{ar_objective, fit_ar_cfpso, FitResult};
pub use swarm::{Particle, Swarm};

use crate::error::{Error, Result};

/// Something to minimize over a box.
pub trait Objective {
    fn evaluate(&self, position: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64,
{
    fn evaluate(&self, position: &[f64]) -> f64 {
        self(position)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VelocityRule {
    /// `v <- w v + r1 c1 (p_i - x) + r2 c2 (p_g - x)`
    InertiaWeight,
    /// `v <- k [v + r1 c1 (p_i - x) + r2 c2 (p_g - x)]`
    #[default]
    ConstrictionFactor,
}

/// Clerc-Kennedy constriction factor `2 / |2 - phi - sqrt(phi^2 - 4 phi)|`
/// for `phi = c1 + c2 > 4`.
pub fn constriction_factor(c1: f64, c2: f64) -> Result<f64> {
    let phi = c1 + c2;
    if !(phi > 4.0) {
        return Err(Error::PhiOutOfRange { phi });
    }
    Ok(2.0 / (2.0 - phi - (phi * phi - 4.0 * phi).sqrt()).abs())
}

/// Per-dimension search box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn uniform(dimension: usize, lower: f64, upper: f64) -> Self {
        Self {
            lower: vec![lower; dimension],
            upper: vec![upper; dimension],
        }
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(x, (lo, hi))| (*lo..=*hi).contains(x))
    }

    pub fn clamp(&self, position: &mut [f64]) {
        for (x, (lo, hi)) in position.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            if *x > *hi {
                *x = *hi;
            } else if *x < *lo {
                *x = *lo;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    pub dimension: usize,
    pub swarm_size: usize,
    pub c1: f64,
    pub c2: f64,
    /// Only used by [`VelocityRule::InertiaWeight`].
    pub inertia_weight: f64,
    pub velocity_rule: VelocityRule,
    pub max_iterations: usize,
    pub stall_tolerance: f64,
    pub stall_window: usize,
    pub bounds: Bounds,
    pub rng_seed: u64,
    /// Positions injected as the first particles of the initial swarm.
    #[serde(default)]
    pub seed_positions: Vec<Vec<f64>>,
}

impl PsoConfig {
    pub const DEFAULT_SWARM_SIZE: usize = 30;
    pub const DEFAULT_MAX_ITERATIONS: usize = 100;
    pub const DEFAULT_STALL_TOLERANCE: f64 = 1e-3;
    pub const DEFAULT_STALL_WINDOW: usize = 20;
    pub const DEFAULT_AR_BOUND: f64 = 2.0;

    /// Constriction-factor PSO with `c1 = c2 = 2.05` on `[-2, 2]^dimension`.
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            swarm_size: Self::DEFAULT_SWARM_SIZE,
            c1: 2.05,
            c2: 2.05,
            inertia_weight: 0.7298,
            velocity_rule: VelocityRule::ConstrictionFactor,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            stall_tolerance: Self::DEFAULT_STALL_TOLERANCE,
            stall_window: Self::DEFAULT_STALL_WINDOW,
            bounds: Bounds::uniform(dimension, -Self::DEFAULT_AR_BOUND, Self::DEFAULT_AR_BOUND),
            rng_seed: 0,
            seed_positions: Vec::new(),
        }
    }

    pub fn with_bounds(mut self, lower: f64, upper: f64) -> Self {
        self.bounds = Bounds::uniform(self.dimension, lower, upper);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_rule(mut self, rule: VelocityRule) -> Self {
        self.velocity_rule = rule;
        self
    }

    pub fn with_seed_positions(mut self, positions: Vec<Vec<f64>>) -> Self {
        self.seed_positions = positions;
        self
    }

    /// Copy of this configuration for another dimension, keeping the
    /// per-coefficient bound of the first dimension.
    pub fn resized(&self, dimension: usize) -> Self {
        let lo = self.bounds.lower.first().copied().unwrap_or(-Self::DEFAULT_AR_BOUND);
        let hi = self.bounds.upper.first().copied().unwrap_or(Self::DEFAULT_AR_BOUND);
        Self {
            dimension,
            bounds: Bounds::uniform(dimension, lo, hi),
            seed_positions: Vec::new(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidConfig(msg));
        if self.dimension == 0 {
            return invalid("dimension must be at least 1".into());
        }
        if self.swarm_size < 2 {
            return invalid(format!("swarm size {} must be at least 2", self.swarm_size));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return invalid("learning coefficients must be positive".into());
        }
        match self.velocity_rule {
            VelocityRule::ConstrictionFactor => {
                constriction_factor(self.c1, self.c2)?;
            }
            VelocityRule::InertiaWeight => {
                if !(self.inertia_weight > 0.0) {
                    return invalid("inertia weight must be positive".into());
                }
            }
        }
        if !(self.stall_tolerance > 0.0) {
            return invalid("stall tolerance must be positive".into());
        }
        if self.stall_window == 0 {
            return invalid("stall window must be at least 1".into());
        }
        let b = &self.bounds;
        if b.lower.len() != self.dimension || b.upper.len() != self.dimension {
            return invalid("bounds must have one entry per dimension".into());
        }
        for (d, (lo, hi)) in b.lower.iter().zip(&b.upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return invalid(format!("bounds for dimension {d} must satisfy min < max"));
            }
        }
        if self.seed_positions.len() > self.swarm_size {
            return invalid("more seed positions than particles".into());
        }
        for (i, p) in self.seed_positions.iter().enumerate() {
            if p.len() != self.dimension || !b.contains(p) {
                return invalid(format!("seed position {i} is outside the search box"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    MaxIterations,
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub best_position: Vec<f64>,
    pub best_value: f64,
    /// Global best after initialization, then after every iteration.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub termination: Termination,
}

/// Iterates until `max_iterations` or until the global best improved by less
/// than `stall_tolerance` (relative) over the last `stall_window` iterations.
pub fn optimize<O: Objective + ?Sized>(config: &PsoConfig, objective: &O) -> Result<Optimum> {
    let mut swarm = Swarm::initialize(config, objective)?;
    let mut termination = Termination::MaxIterations;
    while swarm.iteration() < config.max_iterations {
        swarm.step(config, objective)?;
        if stalled(swarm.trace(), config.stall_window, config.stall_tolerance) {
            termination = Termination::Stalled;
            break;
        }
    }
    Ok(Optimum {
        best_position: swarm.global_best_position().to_vec(),
        best_value: swarm.global_best_value(),
        iterations: swarm.iteration(),
        trace: swarm.into_trace(),
        termination,
    })
}

fn stalled(trace: &[f64], window: usize, tolerance: f64) -> bool {
    let last = trace.len() - 1;
    if last < window {
        return false;
    }
    let (old, new) = (trace[last - window], trace[last]);
    old - new <= tolerance * old.abs()
}
