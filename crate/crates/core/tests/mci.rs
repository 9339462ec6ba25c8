//! Hit-or-miss integration statistics.

use std::f64::consts::PI;

use qae_core::mci::{amplitude_as_counting, hit_or_miss, Integrand, IntegrandPair};
use qae_core::qaa::ProblemSpec;

fn estimates(pair: &IntegrandPair, samples: u64, seeds: u64) -> Vec<f64> {
    (0..seeds)
        .map(|s| hit_or_miss(pair, samples, s).unwrap().estimate)
        .collect()
}

fn rmse(xs: &[f64], truth: f64) -> f64 {
    (xs.iter().map(|x| (x - truth).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

#[test]
fn sinpi_estimate_is_unbiased() {
    let truth = 2.0 / PI;
    let xs = estimates(&IntegrandPair::preset("sinpi").unwrap(), 10_000, 200);
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    let sem = (var / xs.len() as f64).sqrt();
    assert!((mean - truth).abs() < 3.0 * sem, "mean {mean}, sem {sem}");
}

#[test]
fn error_shrinks_with_samples() {
    let pair = IntegrandPair::preset("sinpi").unwrap();
    let truth = 2.0 / PI;
    let coarse = rmse(&estimates(&pair, 1_000, 50), truth);
    let fine = rmse(&estimates(&pair, 100_000, 50), truth);
    assert!(fine < coarse, "rmse {coarse} at 10³ vs {fine} at 10⁵");
    // Binomial scaling predicts a factor of ten.
    assert!(fine < coarse / 4.0);
}

#[test]
fn area_between_two_curves_in_a_shifted_box() {
    // ∫₁³ (x² − x) dx = 26/3 − 4 = 14/3, with y drawn from [0, 9].
    let pair = IntegrandPair {
        f: Integrand::Polynomial {
            coeffs: vec![0.0, 0.0, 1.0],
        },
        g: Integrand::Polynomial {
            coeffs: vec![0.0, 1.0],
        },
        bounds: vec![(1.0, 3.0)],
        range: (0.0, 9.0),
    };
    let r = hit_or_miss(&pair, 400_000, 5).unwrap();
    assert_eq!(r.box_volume, 18.0);
    assert_eq!(r.order_violations, 0);
    let p: f64 = 14.0 / 3.0 / 18.0;
    let sd = 18.0 * (p * (1.0 - p) / 400_000.0).sqrt();
    assert!((r.estimate - 14.0 / 3.0).abs() < 5.0 * sd, "{}", r.estimate);
}

#[test]
fn table_integrand_in_two_dimensions() {
    // Tent on x₀, constant in x₁: area 1/2 over the unit square.
    let pair = IntegrandPair::unit(
        Integrand::Table {
            xs: vec![0.0, 0.5, 1.0],
            ys: vec![0.0, 1.0, 0.0],
        },
        2,
    );
    let r = hit_or_miss(&pair, 200_000, 8).unwrap();
    assert!((r.estimate - 0.5).abs() < 5.0 * (0.25f64 / 200_000.0).sqrt());
}

#[test]
fn order_violations_are_counted_not_hidden() {
    // f = x lies below g = 1/2 on half the domain.
    let pair = IntegrandPair {
        f: Integrand::Polynomial {
            coeffs: vec![0.0, 1.0],
        },
        g: Integrand::Constant { value: 0.5 },
        bounds: vec![(0.0, 1.0)],
        range: (0.0, 1.0),
    };
    let r = hit_or_miss(&pair, 100_000, 1).unwrap();
    let frac = r.order_violations as f64 / r.samples as f64;
    assert!((frac - 0.5).abs() < 0.01, "{frac}");
}

#[test]
fn chunking_does_not_change_results() {
    // More samples than one chunk, and the same seed twice.
    let pair = IntegrandPair::preset("x").unwrap();
    let a = hit_or_miss(&pair, 150_001, 12).unwrap();
    assert_eq!(a, hit_or_miss(&pair, 150_001, 12).unwrap());
    assert_eq!(a.samples, 150_001);
}

#[test]
fn degenerate_inputs_are_rejected() {
    let mut pair = IntegrandPair::preset("one").unwrap();
    assert!(hit_or_miss(&pair, 0, 1).is_err());
    pair.bounds = vec![(1.0, 1.0)];
    assert!(hit_or_miss(&pair, 10, 1).is_err());
    assert!(IntegrandPair::preset("cosh").is_err());
}

#[test]
fn counting_amplitude_is_the_good_fraction() {
    let spec = ProblemSpec::parse(3, "000,011,111").unwrap();
    assert_eq!(amplitude_as_counting(&spec), 3.0 / 8.0);
}
