//! Maximum-likelihood amplitude estimation.
//!
//! Circuit `k` of a schedule is `Q^{m_k}·A` with only the flag measured. Hit
//! counts from all circuits are combined through
//! `ln L(θ) = Σ_k 2h_k·ln|sin((2m_k+1)θ)| + 2(N_k−h_k)·ln|cos((2m_k+1)θ)|`,
//! maximized by exhaustive search over `[ε, π/2 − ε]` with `ε = 1/grid`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qaa::{amplified_circuit, build_a, build_q, ProblemSpec};
use crate::rng;
use crate::statevec::{sample_with_rng, Circuit, StateVector};

pub const DEFAULT_GRID_POINTS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    /// Powers `0, 1, 2, 3, ...`
    Lis,
    /// Powers `0, 1, 2, 4, 8, ...`
    Eis,
}

impl FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lis" => Ok(ScheduleKind::Lis),
            "eis" => Ok(ScheduleKind::Eis),
            other => Err(Error::InvalidArgument(format!(
                "unknown schedule kind {other:?}"
            ))),
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleKind::Lis => "lis",
            ScheduleKind::Eis => "eis",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub num_circuits: usize,
    pub powers: Vec<usize>,
}

pub fn build_schedule(kind: ScheduleKind, num_circuits: usize) -> Result<Schedule> {
    if num_circuits == 0 {
        return Err(Error::InvalidArgument(
            "a schedule needs at least one circuit".into(),
        ));
    }
    let powers = (0..num_circuits)
        .map(|k| match (kind, k) {
            (_, 0) => 0,
            (ScheduleKind::Lis, k) => k,
            (ScheduleKind::Eis, k) => 1 << (k - 1),
        })
        .collect();
    Ok(Schedule {
        kind,
        num_circuits,
        powers,
    })
}

/// Total applications of `Q` across the schedule.
pub fn query_count(schedule: &Schedule) -> usize {
    schedule.powers.iter().sum()
}

/// Outcome of one circuit: `hits` of `shots` read the flag as 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub power: usize,
    pub shots: u64,
    pub hits: u64,
}

impl ShotRecord {
    pub fn new(power: usize, shots: u64, hits: u64) -> Result<Self> {
        let r = ShotRecord { power, shots, hits };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        if self.hits > self.shots {
            return Err(Error::InvalidArgument(format!(
                "record for power {} has {} hits out of {} shots",
                self.power, self.hits, self.shots
            )));
        }
        Ok(())
    }

    pub fn misses(&self) -> u64 {
        self.shots - self.hits
    }
}

/// Builds records from parallel `ones` / `zeros` count vectors.
pub fn records_from_counts(
    powers: &[usize],
    ones: &[u64],
    zeros: &[u64],
) -> Result<Vec<ShotRecord>> {
    if powers.len() != ones.len() || ones.len() != zeros.len() {
        return Err(Error::InvalidArgument(
            "count vectors differ in length".into(),
        ));
    }
    powers
        .iter()
        .zip(ones.iter().zip(zeros))
        .map(|(&p, (&h, &z))| ShotRecord::new(p, h + z, h))
        .collect()
}

/// Parses a JSON array of `{power, shots, hits}`.
pub fn records_from_json(json: &str) -> Result<Vec<ShotRecord>> {
    let records: Vec<ShotRecord> = serde_json::from_str(json)?;
    if records.is_empty() {
        return Err(Error::InvalidArgument("records file is empty".into()));
    }
    for r in &records {
        r.validate()?;
    }
    Ok(records)
}

pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<ShotRecord>> {
    records_from_json(&std::fs::read_to_string(path)?)
}

/// The circuits of a schedule, in schedule order.
pub fn schedule_circuits(spec: &ProblemSpec, schedule: &Schedule) -> Vec<Circuit> {
    let a_op = build_a(spec);
    let q_op = build_q(&a_op);
    schedule
        .powers
        .iter()
        .map(|&m| amplified_circuit(&a_op, &q_op, m))
        .collect()
}

/// Exact `P(flag = 1)` of each schedule circuit.
pub fn exact_hit_probabilities(spec: &ProblemSpec, schedule: &Schedule) -> Result<Vec<f64>> {
    schedule_circuits(spec, schedule)
        .iter()
        .map(|c| {
            let mut s = StateVector::zero(c.num_qubits())?;
            s.run(c)?;
            s.probability_of(spec.flag_qubit(), true)
        })
        .collect()
}

/// Simulates every circuit and samples the flag `shots_per_circuit` times.
/// Circuit `k` draws from RNG stream `k` of `seed`, so the records do not
/// depend on the order or parallelism of execution.
pub fn run_mlqae(
    spec: &ProblemSpec,
    schedule: &Schedule,
    shots_per_circuit: u64,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    if shots_per_circuit == 0 {
        return Err(Error::ZeroShots);
    }
    let flag = spec.flag_qubit();
    let circuits = schedule_circuits(spec, schedule);
    circuits
        .par_iter()
        .zip(schedule.powers.par_iter())
        .enumerate()
        .map(|(k, (c, &power))| {
            let mut s = StateVector::zero(c.num_qubits())?;
            s.run(c)?;
            let mut rng = rng::stream(seed, k as u64);
            let rec = sample_with_rng(&s, &[flag], shots_per_circuit, seed, &mut rng)?;
            ShotRecord::new(power, shots_per_circuit, rec.count("1"))
        })
        .collect()
}

/// Log-likelihood of `θ`. Zero-count terms are skipped; the result is `-∞`
/// when a term with a positive count has a zero sine or cosine.
pub fn log_likelihood(theta: f64, records: &[ShotRecord]) -> f64 {
    records
        .iter()
        .map(|r| {
            let angle = (2 * r.power + 1) as f64 * theta;
            let mut v = 0.0;
            if r.hits > 0 {
                v += 2.0 * r.hits as f64 * angle.sin().abs().ln();
            }
            if r.misses() > 0 {
                v += 2.0 * r.misses() as f64 * angle.cos().abs().ln();
            }
            v
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MLEResult {
    pub theta_hat: f64,
    pub amplitude_hat: f64,
    pub grid_points: usize,
    pub log_likelihood_at_max: f64,
}

/// The search grid: `grid_points` evenly spaced angles from `ε` to `π/2 − ε`.
pub fn theta_grid(grid_points: usize) -> Vec<f64> {
    let eps = 1.0 / grid_points as f64;
    let (lo, hi) = (eps, std::f64::consts::FRAC_PI_2 - eps);
    let step = (hi - lo) / (grid_points - 1) as f64;
    (0..grid_points).map(|i| lo + step * i as f64).collect()
}

/// Grid-search maximum of [`log_likelihood`]; the first (smallest) maximizing
/// angle wins and non-finite grid points are skipped.
pub fn mle_estimate(records: &[ShotRecord], grid_points: usize) -> Result<MLEResult> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to fit".into()));
    }
    if grid_points < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 points".into(),
        ));
    }
    for r in records {
        r.validate()?;
    }
    let grid = theta_grid(grid_points);
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| log_likelihood(t, records))
        .collect();
    let mut best: Option<(f64, f64)> = None;
    for (&t, &v) in grid.iter().zip(&values) {
        if !v.is_finite() {
            continue;
        }
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((t, v));
        }
    }
    let (theta_hat, ll) = best.ok_or(Error::NoFiniteLikelihood)?;
    Ok(MLEResult {
        theta_hat,
        amplitude_hat: theta_hat.sin().powi(2),
        grid_points,
        log_likelihood_at_max: ll,
    })
}

/// `|estimate − truth| / truth`.
pub fn relative_error(estimate: f64, truth: f64) -> f64 {
    (estimate - truth).abs() / truth
}
