use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{constriction_factor, Objective, PsoConfig, VelocityRule};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_value: f64,
}

/// Global-best swarm. Owns its random stream so a run is reproducible from
/// the configured seed.
#[derive(Debug, Clone)]
pub struct Swarm {
    particles: Vec<Particle>,
    global_best_position: Vec<f64>,
    global_best_value: f64,
    iteration: usize,
    trace: Vec<f64>,
    rng: ChaCha8Rng,
}

fn evaluate<O: Objective + ?Sized>(objective: &O, position: &[f64], particle: usize) -> Result<f64> {
    let value = objective.evaluate(position);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::ObjectiveNonFinite { particle })
    }
}

impl Swarm {
    /// Uniform positions in the box (seed positions first), zero velocities.
    pub fn initialize<O: Objective + ?Sized>(config: &PsoConfig, objective: &O) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        let bounds = &config.bounds;
        let mut particles = Vec::with_capacity(config.swarm_size);
        for i in 0..config.swarm_size {
            let position = match config.seed_positions.get(i) {
                Some(p) => p.clone(),
                None => (0..config.dimension)
                    .map(|d| {
                        let (lo, hi) = (bounds.lower[d], bounds.upper[d]);
                        lo + (hi - lo) * rng.random::<f64>()
                    })
                    .collect(),
            };
            let value = evaluate(objective, &position, i)?;
            particles.push(Particle {
                velocity: vec![0.0; config.dimension],
                best_position: position.clone(),
                position,
                best_value: value,
            });
        }
        let mut swarm = Self {
            global_best_position: particles[0].best_position.clone(),
            global_best_value: particles[0].best_value,
            particles,
            iteration: 0,
            trace: Vec::with_capacity(config.max_iterations + 1),
            rng,
        };
        swarm.refresh_global_best();
        swarm.trace.push(swarm.global_best_value);
        Ok(swarm)
    }

    /// One synchronous iteration: every particle moves using the global best
    /// from the previous iteration, then bests are refreshed.
    pub fn step<O: Objective + ?Sized>(&mut self, config: &PsoConfig, objective: &O) -> Result<()> {
        let (scale, inertia) = match config.velocity_rule {
            VelocityRule::ConstrictionFactor => (constriction_factor(config.c1, config.c2)?, 1.0),
            VelocityRule::InertiaWeight => (1.0, config.inertia_weight),
        };
        let gbest = &self.global_best_position;
        for p in &mut self.particles {
            for d in 0..config.dimension {
                let r1: f64 = self.rng.random();
                let r2: f64 = self.rng.random();
                let x = p.position[d];
                p.velocity[d] = scale
                    * (inertia * p.velocity[d]
                        + r1 * config.c1 * (p.best_position[d] - x)
                        + r2 * config.c2 * (gbest[d] - x));
                p.position[d] = x + p.velocity[d];
            }
            config.bounds.clamp(&mut p.position);
        }
        for (i, p) in self.particles.iter_mut().enumerate() {
            let value = evaluate(objective, &p.position, i)?;
            if value < p.best_value {
                p.best_value = value;
                p.best_position.clone_from(&p.position);
            }
        }
        self.refresh_global_best();
        self.iteration += 1;
        self.trace.push(self.global_best_value);
        Ok(())
    }

    fn refresh_global_best(&mut self) {
        for p in &self.particles {
            if p.best_value < self.global_best_value {
                self.global_best_value = p.best_value;
                self.global_best_position.clone_from(&p.best_position);
            }
        }
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn global_best_position(&self) -> &[f64] {
        &self.global_best_position
    }

    pub fn global_best_value(&self) -> f64 {
        self.global_best_value
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn trace(&self) -> &[f64] {
        &self.trace
    }

    pub fn into_trace(self) -> Vec<f64> {
        self.trace
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pso::Bounds;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn initialization_is_deterministic() {
        let config = PsoConfig::new(3).with_seed(17);
        let a = Swarm::initialize(&config, &sphere).unwrap();
        let b = Swarm::initialize(&config, &sphere).unwrap();
        assert_eq!(a.particles(), b.particles());
        assert!(a.particles().iter().all(|p| p.velocity.iter().all(|v| *v == 0.0)));
    }

    #[test]
    fn seeded_particle_keeps_its_position() {
        let seed = vec![0.25, -1.5];
        let config = PsoConfig::new(2).with_seed_positions(vec![seed.clone()]);
        let swarm = Swarm::initialize(&config, &sphere).unwrap();
        assert_eq!(swarm.particles()[0].position, seed);
    }

    #[test]
    fn uniform_initial_positions() {
        let mut config = PsoConfig::new(2).with_bounds(-1.0, 1.0).with_seed(4);
        config.swarm_size = 10_000;
        let swarm = Swarm::initialize(&config, &sphere).unwrap();
        for d in 0..2 {
            let mean = swarm.particles().iter().map(|p| p.position[d]).sum::<f64>() / 10_000.0;
            assert!(mean.abs() < 0.05, "{mean}");
        }
        assert!(swarm.particles().iter().all(|p| config.bounds.contains(&p.position)));
    }

    #[test]
    fn non_finite_objective_rejected() {
        let config = PsoConfig::new(1);
        let err = Swarm::initialize(&config, &|_: &[f64]| f64::NAN).unwrap_err();
        assert_eq!(err, Error::ObjectiveNonFinite { particle: 0 });
    }

    #[test]
    fn converged_swarm_is_a_fixed_point() {
        for rule in [VelocityRule::ConstrictionFactor, VelocityRule::InertiaWeight] {
            let mut config = PsoConfig::new(2).with_rule(rule);
            config.swarm_size = 4;
            config.seed_positions = vec![vec![0.5, -0.5]; 4];
            let mut swarm = Swarm::initialize(&config, &sphere).unwrap();
            swarm.step(&config, &sphere).unwrap();
            for p in swarm.particles() {
                assert_eq!(p.position, vec![0.5, -0.5]);
                assert_eq!(p.velocity, vec![0.0, 0.0]);
            }
        }
    }

    #[test]
    fn overshoot_is_clamped_to_the_bound() {
        // a linear objective drives particles into the upper corner
        let mut config = PsoConfig::new(1).with_seed(9);
        config.bounds = Bounds::uniform(1, -1.0, 1.0);
        let f = |x: &[f64]| -x[0];
        let mut swarm = Swarm::initialize(&config, &f).unwrap();
        let mut hit = false;
        for _ in 0..30 {
            swarm.step(&config, &f).unwrap();
            for p in swarm.particles() {
                assert!(p.position[0] <= 1.0 && p.position[0] >= -1.0);
                hit |= p.position[0] == 1.0;
            }
        }
        assert!(hit);
        assert_eq!(swarm.global_best_position(), &[1.0]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn trace_monotone_and_positions_bounded(seed in any::<u64>(), shift in -3.0f64..3.0) {
                let mut config = PsoConfig::new(3).with_bounds(-5.0, 5.0).with_seed(seed);
                config.swarm_size = 8;
                let rastrigin = |x: &[f64]| -> f64 {
                    x.iter()
                        .map(|v| {
                            let z = v - shift;
                            z * z - 10.0 * (2.0 * std::f64::consts::PI * z).cos() + 10.0
                        })
                        .sum()
                };
                let mut swarm = Swarm::initialize(&config, &rastrigin).unwrap();
                for _ in 0..25 {
                    let before = swarm.global_best_value();
                    swarm.step(&config, &rastrigin).unwrap();
                    prop_assert!(swarm.global_best_value() <= before);
                    for p in swarm.particles() {
                        prop_assert!(config.bounds.contains(&p.position));
                    }
                    let min_pbest = swarm
                        .particles()
                        .iter()
                        .map(|p| p.best_value)
                        .fold(f64::INFINITY, f64::min);
                    prop_assert_eq!(min_pbest, swarm.global_best_value());
                }
                prop_assert!(swarm.trace().windows(2).all(|w| w[1] <= w[0]));
            }

            #[test]
            fn runs_are_reproducible(seed in any::<u64>()) {
                let config = PsoConfig::new(2).with_seed(seed);
                let a = crate::pso::optimize(&config, &sphere).unwrap();
                let b = crate::pso::optimize(&config, &sphere).unwrap();
                prop_assert_eq!(a.trace, b.trace);
                prop_assert_eq!(a.best_position, b.best_position);
            }
        }
    }
}
