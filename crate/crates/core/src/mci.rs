//! Classical hit-or-miss Monte Carlo integration.
//!
//! A sample `(x, y)` drawn uniformly from `D × [lo, hi]` is a hit when
//! `g(x) < y < f(x)`; the estimate of `∫_D (f − g)` is the hit fraction times
//! the box volume.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qaa::ProblemSpec;
use crate::rng;

const CHUNK: u64 = 1 << 16;

/// Built-in integrands. Univariate forms read the first coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Integrand {
    Constant {
        value: f64,
    },
    /// `sin(π·x₀)`
    SinPi,
    /// `Σ cᵢ·x₀ⁱ`, lowest degree first.
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// Piecewise-linear through `(xs[i], ys[i])`, clamped outside the table.
    Table {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
}

impl Integrand {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let x0 = x.first().copied().unwrap_or(0.0);
        match self {
            Integrand::Constant { value } => *value,
            Integrand::SinPi => (PI * x0).sin(),
            Integrand::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x0 + c)
            }
            Integrand::Table { xs, ys } => interpolate(xs, ys, x0),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Integrand::Table { xs, ys } = self {
            if xs.is_empty() || xs.len() != ys.len() {
                return Err(Error::InvalidArgument(
                    "table needs matching, nonempty xs and ys".into(),
                ));
            }
            if xs.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidArgument(
                    "table xs must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v <= x);
    if i == 0 {
        return ys[0];
    }
    if i == xs.len() {
        return ys[xs.len() - 1];
    }
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] + t * (ys[i] - ys[i - 1])
}

/// Region between `g` and `f` over a box, with a range interval for the
/// vertical coordinate that must enclose both curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrandPair {
    pub f: Integrand,
    pub g: Integrand,
    pub bounds: Vec<(f64, f64)>,
    pub range: (f64, f64),
}

impl IntegrandPair {
    /// `f` over `[0,1]ⁿ` with `g = 0` and range `[0, 1]`.
    pub fn unit(f: Integrand, dims: usize) -> Self {
        IntegrandPair {
            f,
            g: Integrand::Constant { value: 0.0 },
            bounds: vec![(0.0, 1.0); dims],
            range: (0.0, 1.0),
        }
    }

    /// Named integrands: `sinpi`, `one`, `x`.
    pub fn preset(name: &str) -> Result<Self> {
        let f = match name.to_ascii_lowercase().as_str() {
            "sinpi" | "sin" => Integrand::SinPi,
            "one" | "constant" => Integrand::Constant { value: 1.0 },
            "x" | "linear" => Integrand::Polynomial {
                coeffs: vec![0.0, 1.0],
            },
            _ => return Err(Error::UnknownPreset(name.to_string())),
        };
        Ok(IntegrandPair::unit(f, 1))
    }

    pub fn box_volume(&self) -> f64 {
        self.bounds.iter().map(|(a, b)| b - a).product::<f64>() * (self.range.1 - self.range.0)
    }

    fn validate(&self) -> Result<()> {
        self.f.validate()?;
        self.g.validate()?;
        if self.bounds.is_empty() {
            return Err(Error::DegenerateBox("no domain dimensions".into()));
        }
        for (i, &(a, b)) in self
            .bounds
            .iter()
            .chain(std::iter::once(&self.range))
            .enumerate()
        {
            if !(a.is_finite() && b.is_finite() && b > a) {
                return Err(Error::DegenerateBox(format!("interval {i} is [{a}, {b}]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCIResult {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub box_volume: f64,
    /// Samples where `f(x) < g(x)`.
    pub order_violations: u64,
}

/// Hit-or-miss estimate of `∫ (f − g)` with `samples` points. Work is split
/// into fixed chunks, each with its own RNG stream, so the result depends
/// only on `(pair, samples, seed)`.
pub fn hit_or_miss(pair: &IntegrandPair, samples: u64, seed: u64) -> Result<MCIResult> {
    if samples == 0 {
        return Err(Error::ZeroShots);
    }
    pair.validate()?;
    let dims = pair.bounds.len();
    let chunks = samples.div_ceil(CHUNK);
    let (hits, violations) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = CHUNK.min(samples - c * CHUNK);
            let mut rng = rng::stream(seed, c);
            let mut x = vec![0.0; dims];
            let (mut hits, mut bad) = (0u64, 0u64);
            for _ in 0..n {
                for (xi, &(a, b)) in x.iter_mut().zip(&pair.bounds) {
                    *xi = rng.random_range(a..b);
                }
                let y = rng.random_range(pair.range.0..pair.range.1);
                let (fx, gx) = (pair.f.eval(&x), pair.g.eval(&x));
                if fx < gx {
                    bad += 1;
                }
                if gx < y && y < fx {
                    hits += 1;
                }
            }
            (hits, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if violations > 0 {
        log::warn!("f < g at {violations} of {samples} samples; that region contributes no hits");
    }
    let box_volume = pair.box_volume();
    Ok(MCIResult {
        samples,
        hits,
        estimate: hits as f64 / samples as f64 * box_volume,
        box_volume,
        order_violations: violations,
    })
}

/// Fraction of good states in the domain, `k / N`. Equals the amplitude
/// that the quantum estimators target.
pub fn amplitude_as_counting(spec: &ProblemSpec) -> f64 {
    let a = spec.num_good() as f64 / spec.domain_size() as f64;
    debug_assert!((a - spec.amplitude()).abs() < 1e-12);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_box_always_hits() {
        let pair = IntegrandPair {
            f: Integrand::Constant { value: 1.0 },
            g: Integrand::Constant { value: 0.0 },
            bounds: vec![(0.0, 1.0)],
            range: (0.0, 1.0),
        };
        let r = hit_or_miss(&pair, 10_000, 1).unwrap();
        assert_eq!(r.hits, 10_000);
        assert_eq!(r.estimate, 1.0);
    }

    #[test]
    fn sine_and_line() {
        let r = hit_or_miss(&IntegrandPair::preset("sinpi").unwrap(), 1_000_000, 5).unwrap();
        assert!((r.estimate - 2.0 / PI).abs() < 0.005);
        let r = hit_or_miss(&IntegrandPair::preset("x").unwrap(), 1_000_000, 5).unwrap();
        assert!((0.498..=0.502).contains(&r.estimate));
    }

    #[test]
    fn seeded_and_chunk_independent_of_threads() {
        let pair = IntegrandPair::preset("sinpi").unwrap();
        let a = hit_or_miss(&pair, 200_000, 9).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| hit_or_miss(&pair, 200_000, 9).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, hit_or_miss(&pair, 200_000, 10).unwrap());
    }

    #[test]
    fn rejects_degenerate_input() {
        let mut pair = IntegrandPair::preset("one").unwrap();
        assert!(hit_or_miss(&pair, 0, 1).is_err());
        pair.bounds = vec![(1.0, 1.0)];
        assert!(matches!(
            hit_or_miss(&pair, 10, 1),
            Err(Error::DegenerateBox(_))
        ));
        assert!(IntegrandPair::preset("cosh").is_err());
    }

    #[test]
    fn inverted_pair_is_reported() {
        let pair = IntegrandPair {
            f: Integrand::Constant { value: 0.2 },
            g: Integrand::Constant { value: 0.8 },
            bounds: vec![(0.0, 1.0)],
            range: (0.0, 1.0),
        };
        let r = hit_or_miss(&pair, 1000, 1).unwrap();
        assert_eq!(r.hits, 0);
        assert_eq!(r.order_violations, 1000);
    }

    #[test]
    fn integrand_forms() {
        let p = Integrand::Polynomial {
            coeffs: vec![1.0, 0.0, 2.0],
        };
        assert_eq!(p.eval(&[3.0]), 19.0);
        let t = Integrand::Table {
            xs: vec![0.0, 1.0, 2.0],
            ys: vec![0.0, 2.0, 0.0],
        };
        assert_eq!(t.eval(&[0.5]), 1.0);
        assert_eq!(t.eval(&[5.0]), 0.0);
        assert_eq!(t.eval(&[-1.0]), 0.0);
        assert!(Integrand::Table {
            xs: vec![1.0, 0.0],
            ys: vec![0.0, 0.0]
        }
        .validate()
        .is_err());
    }

    #[test]
    fn counting_matches_amplitude() {
        assert_eq!(
            amplitude_as_counting(&ProblemSpec::parse(2, "01").unwrap()),
            0.25
        );
        assert_eq!(
            amplitude_as_counting(&ProblemSpec::parse(2, "").unwrap()),
            0.0
        );
    }
}
