//! Phase-estimation amplitude estimation.

use std::f64::consts::PI;

use qae_core::cqae::{
    build_cqae_circuit, controlled_q_counts, exact_distribution, readout_theta, run_cqae,
    run_cqae_exact, CQAEConfig,
};
use qae_core::qaa::ProblemSpec;
use qae_core::transpile::{depth, lower, BasisGateSet};

fn config(n: usize, good: &str, m: usize) -> CQAEConfig {
    CQAEConfig::new(ProblemSpec::parse(n, good).unwrap(), m, 1000, 7)
}

#[test]
fn controlled_q_total_is_two_to_the_m_minus_one() {
    for m in 1..=5 {
        let cfg = config(2, "01", m);
        let circuit = build_cqae_circuit(&cfg).unwrap();
        let counts = controlled_q_counts(&cfg, &circuit);
        assert_eq!(counts, (0..m).map(|j| 1usize << j).collect::<Vec<_>>());
        assert_eq!(counts.iter().sum::<usize>(), (1 << m) - 1);
    }
}

#[test]
fn on_grid_angles_read_out_deterministically() {
    // θ = π/4 (half the domain good) and θ = π/2 (all good) sit on every grid with m ≥ 2.
    for (n, good, theta) in [
        (1, "1", PI / 4.0),
        (2, "00,11", PI / 4.0),
        (2, "00,01,10,11", PI / 2.0),
    ] {
        for m in 2..=4 {
            let cfg = config(n, good, m);
            let dist = exact_distribution(&cfg).unwrap();
            let support: Vec<u64> = (0..dist.len() as u64)
                .filter(|&y| dist[y as usize] > 1e-9)
                .collect();
            assert!(
                support
                    .iter()
                    .all(|&y| (readout_theta(y, m) - theta).abs() < 1e-12),
                "{good}, m={m}"
            );
            let sampled = run_cqae(&cfg).unwrap();
            assert!((sampled.theta_estimate - theta).abs() < 1e-12);
            assert!((sampled.mass_at_theta(theta) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn mirrored_readings_fold_together() {
    for m in 1..=6 {
        let size = 1u64 << m;
        for y in 1..size {
            assert!(
                (readout_theta(y, m) - readout_theta(size - y, m)).abs() < 1e-12,
                "y={y}, m={m}"
            );
        }
        assert_eq!(readout_theta(0, m), 0.0);
    }
}

#[test]
fn exact_distribution_is_normalized_and_symmetric() {
    for (n, good) in [(2, "01"), (3, "000,101,110"), (2, "")] {
        for m in 1..=4 {
            let dist = exact_distribution(&config(n, good, m)).unwrap();
            assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            let size = dist.len();
            for y in 1..size {
                assert!(
                    (dist[y] - dist[size - y]).abs() < 1e-10,
                    "{good}, m={m}, y={y}"
                );
            }
        }
    }
}

#[test]
fn sampled_histogram_tracks_exact_distribution() {
    let mut cfg = config(2, "01", 3);
    cfg.shots = 20_000;
    let sampled = run_cqae(&cfg).unwrap();
    let exact = run_cqae_exact(&cfg).unwrap();
    assert_eq!(sampled.histogram.values().sum::<u64>(), 20_000);
    let dist = exact.distribution.unwrap();
    for (key, &p) in &dist {
        let f = sampled.histogram.get(key).copied().unwrap_or(0) as f64 / 20_000.0;
        let sd = (p * (1.0 - p) / 20_000.0).sqrt();
        assert!((f - p).abs() <= 5.0 * sd + 1e-9, "{key}: {f} vs {p}");
    }
    assert_eq!(sampled.theta_estimate, exact.theta_estimate);
}

#[test]
fn lowered_depth_explodes_with_ancillae() {
    let lowered = |m| {
        let circuit = build_cqae_circuit(&config(2, "01", m)).unwrap();
        depth(&lower(&circuit, &BasisGateSet::default()).unwrap())
    };
    let (d1, d3) = (lowered(1), lowered(3));
    assert!(d3 > 5 * d1, "depth {d1} (m=1) vs {d3} (m=3)");
}

#[test]
fn same_seed_same_histogram() {
    let cfg = config(3, "011,100", 4);
    assert_eq!(run_cqae(&cfg).unwrap(), run_cqae(&cfg).unwrap());
}
