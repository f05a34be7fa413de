mod common;

use arswarm::estimators::{
    fit_forward_backward, fit_geometric_lattice, fit_least_squares, fit_yule_walker, lattice_reflections,
    EstimatorKind,
};
use arswarm::series::{demean, model_rss, ArModel, PredictionMode, TimeSeries};
use nalgebra::DMatrix;
use num::{BigRational, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

/// Solves the normal equations of `rows -> target` exactly in rationals.
fn exact_normal_equations(rows: &[Vec<f64>], target: &[f64]) -> Vec<f64> {
    let k = rows[0].len();
    let q = |v: f64| BigRational::from_float(v).unwrap();
    let mut a = vec![vec![BigRational::zero(); k + 1]; k];
    for (row, y) in rows.iter().zip(target) {
        let row: Vec<BigRational> = row.iter().map(|&v| q(v)).collect();
        let y = q(*y);
        for i in 0..k {
            for j in 0..k {
                a[i][j] += &row[i] * &row[j];
            }
            a[i][k] += &row[i] * &y;
        }
    }
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero()).expect("singular oracle system");
        a.swap(col, pivot);
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..=k {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    (0..k).map(|i| (&a[i][k] / &a[i][i]).to_f64().unwrap()).collect()
}

/// `[1, x_{t-1}, ..., x_{t-p}] -> x_t` rows.
fn forward_rows(x: &[f64], p: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    (p..x.len())
        .map(|t| {
            let mut row = vec![1.0];
            row.extend((1..=p).map(|i| x[t - i]));
            (row, x[t])
        })
        .unzip()
}

fn backward_rows(x: &[f64], p: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    (0..x.len() - p)
        .map(|s| {
            let mut row = vec![1.0];
            row.extend((1..=p).map(|i| x[s + i]));
            (row, x[s])
        })
        .unzip()
}

fn geometric(phi: f64, n: usize) -> Vec<f64> {
    std::iter::successors(Some(1.0f64), |v| Some(phi * v)).take(n).collect()
}

#[test]
fn least_squares_on_a_ramp_matches_exact_regression() {
    let ramp = TimeSeries::new((1..=100).map(f64::from).collect()).unwrap();
    let (centered, _) = demean(&ramp);
    let (rows, target) = forward_rows(centered.values(), 1);
    let oracle = exact_normal_equations(&rows, &target);
    let fit = fit_least_squares(&centered, 1).unwrap();
    assert!((fit.coefficients()[0] - oracle[1]).abs() < 0.01);
}

#[test]
fn least_squares_matches_exact_regression_on_noisy_data() {
    let s = common::ar2(3, 240);
    for p in 1..=3 {
        let (rows, target) = forward_rows(s.values(), p);
        let oracle = exact_normal_equations(&rows, &target);
        let fit = fit_least_squares(&s, p).unwrap();
        for (a, b) in fit.coefficients().iter().zip(&oracle[1..]) {
            assert!((a - b).abs() < 1e-10, "order {p}: {a} vs {b}");
        }
        assert!((fit.intercept() - oracle[0]).abs() < 1e-10);
    }
}

#[test]
fn forward_backward_matches_exact_stacked_regression() {
    let s = common::ar2(8, 200);
    let (mut rows, mut target) = forward_rows(s.values(), 2);
    let (brows, btarget) = backward_rows(s.values(), 2);
    rows.extend(brows);
    target.extend(btarget);
    let oracle = exact_normal_equations(&rows, &target);
    let fit = fit_forward_backward(&s, 2).unwrap();
    for (a, b) in fit.coefficients().iter().zip(&oracle[1..]) {
        assert!((a - b).abs() < 1e-10);
    }
}

// A noiseless decaying AR(1) cannot satisfy both directions with one
// coefficient: backward errors are zero only at 1/0.7. The stacked criterion
// therefore settles between the two, and the oracle is the exact minimizer.
#[test]
fn forward_backward_on_noiseless_decay_matches_analytic_minimizer() {
    let x = geometric(0.7, 50);
    let (mut rows, mut target) = forward_rows(&x, 1);
    let (brows, btarget) = backward_rows(&x, 1);
    rows.extend(brows);
    target.extend(btarget);
    let oracle = exact_normal_equations(&rows, &target);
    let fit = fit_forward_backward(&TimeSeries::new(x).unwrap(), 1).unwrap();
    assert!((fit.coefficients()[0] - oracle[1]).abs() < 1e-6);
}

#[test]
fn noiseless_ar1_least_squares_is_exact() {
    let fit = fit_least_squares(&TimeSeries::new(geometric(0.7, 50)).unwrap(), 1).unwrap();
    assert!((fit.coefficients()[0] - 0.7).abs() < 1e-10);
}

#[test]
fn yule_walker_injected_acf() {
    let sol = arswarm::estimators::levinson_durbin(&[1.0, 0.5, 0.25, 0.125], 1).unwrap();
    assert_eq!(sol.coefficients, vec![0.5]);
}

#[test]
fn estimators_agree_on_long_realization() {
    let s = common::ar2(99, 16_384);
    let fits: Vec<ArModel> = EstimatorKind::ALL.iter().map(|k| k.fit(&s, 2).unwrap()).collect();
    for a in &fits {
        for b in &fits {
            for (x, y) in a.coefficients().iter().zip(b.coefficients()) {
                assert!((x - y).abs() < 0.02, "{a:?} vs {b:?}");
            }
        }
    }
}

fn companion_spectral_radius(phi: &[f64]) -> f64 {
    let p = phi.len();
    let mut m = DMatrix::zeros(p, p);
    for (j, v) in phi.iter().enumerate() {
        m[(0, j)] = *v;
    }
    for i in 1..p {
        m[(i, i - 1)] = 1.0;
    }
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn arbitrary_series() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 24..120)
        .prop_filter("non-constant", |v| v.iter().any(|x| (x - v[0]).abs() > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn yule_walker_models_are_stable(values in arbitrary_series(), order in 1usize..6) {
        let s = TimeSeries::new(values).unwrap();
        if let Ok(model) = fit_yule_walker(&s, order) {
            prop_assert!(companion_spectral_radius(model.coefficients()) < 1.0);
        }
    }

    #[test]
    fn lattice_reflections_are_bounded(values in arbitrary_series(), order in 1usize..8) {
        let (centered, _) = demean(&TimeSeries::new(values).unwrap());
        for k in lattice_reflections(centered.values(), order) {
            prop_assert!(k.abs() <= 1.0);
        }
    }

    #[test]
    fn lattice_fit_has_requested_order(values in arbitrary_series(), order in 1usize..6) {
        let model = fit_geometric_lattice(&TimeSeries::new(values).unwrap(), order).unwrap();
        prop_assert_eq!(model.order(), order);
    }

    #[test]
    fn coefficients_are_scale_free(seed in 0u64..500, a in prop_oneof![0.001f64..0.1, 10.0f64..1000.0, -100.0f64..-0.5]) {
        let s = common::ar2(seed, 256);
        let scaled = TimeSeries::new(s.values().iter().map(|v| a * v).collect()).unwrap();
        for kind in EstimatorKind::ALL {
            let base = kind.fit(&s, 3).unwrap();
            let other = kind.fit(&scaled, 3).unwrap();
            for (x, y) in base.coefficients().iter().zip(other.coefficients()) {
                prop_assert!((x - y).abs() < 1e-9, "{kind}: {x} vs {y}");
            }
            let ratio = other.innovation_variance() / (base.innovation_variance() * a * a);
            prop_assert!((ratio - 1.0).abs() < 1e-9, "{kind}: variance ratio {ratio}");
        }
    }

    #[test]
    fn least_squares_beats_any_perturbation(
        seed in 0u64..10_000,
        deltas in prop::collection::vec(prop::collection::vec(-0.5f64..0.5, 2), 20),
    ) {
        let s = common::ar2(seed, 300);
        let ls = fit_least_squares(&s, 2).unwrap();
        let best = model_rss(&ls, &s, PredictionMode::OneStepAhead).unwrap();
        for d in deltas {
            let theta: Vec<f64> = ls.coefficients().iter().zip(&d).map(|(c, e)| c + e).collect();
            let intercept = arswarm::series::optimal_intercept(&theta, s.values(), PredictionMode::OneStepAhead);
            let cand = ArModel::deterministic(theta, intercept).unwrap();
            let rss = model_rss(&cand, &s, PredictionMode::OneStepAhead).unwrap();
            prop_assert!(best <= rss * (1.0 + 1e-9));
        }
    }
}

#[test]
fn rational_oracle_sanity() {
    // y = 2 + 3x exactly
    let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![1.0, f64::from(i)]).collect();
    let target: Vec<f64> = (0..5).map(|i| 2.0 + 3.0 * f64::from(i)).collect();
    let sol = exact_normal_equations(&rows, &target);
    assert!(sol[0].is_finite() && (sol[0] - 2.0).abs() < 1e-15 && (sol[1] - 3.0).abs() < 1e-15);
    assert!(BigRational::from_float(-1.5).unwrap().is_negative());
}
