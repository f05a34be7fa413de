#![allow(dead_code)]

use arswarm::series::{simulate_ar, ArModel, SimulationSpec, TimeSeries};

pub const AR2: [f64; 2] = [0.6, -0.3];

/// Unit-variance AR(2) realization with coefficients [0.6, -0.3].
pub fn ar2(seed: u64, n: usize) -> TimeSeries {
    let truth = ArModel::deterministic(AR2.to_vec(), 0.0).unwrap();
    simulate_ar(&truth, &SimulationSpec::new(n, 1.0, seed).warmup(500)).unwrap()
}

/// The default AR(2) fixture: n = 2048.
pub fn fixture(seed: u64) -> TimeSeries {
    ar2(seed, 2048)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
