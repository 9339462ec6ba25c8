//! Per-gate Pauli noise on lowered circuits.
//!
//! After every basis gate, with probability `p·scale` (`p` depends on the gate
//! arity) each qubit the gate touched receives an independent, uniformly drawn
//! X, Y or Z. Shots are simulated independently; shot `s` draws from RNG
//! stream `s`, so counts do not depend on how shots are split across threads.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mlqae::{schedule_circuits, Schedule, ShotRecord};
use crate::qaa::ProblemSpec;
use crate::rng;
use crate::statevec::{sample, CdfSampler, Circuit, Gate, GateOp, MeasurementRecord, StateVector};
use crate::transpile::{lower, BasisGateSet};

const CALIBRATION_JSON: &str = include_str!("../data/noise/calibration.json");

/// Cached prefix states are skipped above this many amplitudes in total.
const PREFIX_CACHE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub single_qubit_error: f64,
    pub two_qubit_error: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, Deserialize)]
struct Calibration {
    single_qubit_error_range: [f64; 2],
    two_qubit_error_range: [f64; 2],
}

impl NoiseModel {
    pub fn new(single_qubit_error: f64, two_qubit_error: f64, scale: f64) -> Result<Self> {
        for (name, p) in [
            ("single-qubit", single_qubit_error),
            ("two-qubit", two_qubit_error),
        ] {
            if !(0.0..=0.5).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} error {p} outside [0, 0.5]"
                )));
            }
        }
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "noise scale {scale} must be nonnegative"
            )));
        }
        Ok(NoiseModel {
            single_qubit_error,
            two_qubit_error,
            scale,
        })
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            single_qubit_error: 0.0,
            two_qubit_error: 0.0,
            scale: 0.0,
        }
    }

    /// Calibration presets. `<device>-<date>` uses the midpoint of the
    /// calibration range; `-min` and `-max` suffixes select its ends.
    pub fn preset(name: &str) -> Result<Self> {
        let table: BTreeMap<String, Calibration> = serde_json::from_str(CALIBRATION_JSON)?;
        let (base, pick): (&str, fn([f64; 2]) -> f64) = if let Some(b) = name.strip_suffix("-min") {
            (b, |r| r[0])
        } else if let Some(b) = name.strip_suffix("-max") {
            (b, |r| r[1])
        } else {
            (name, |r| (r[0] + r[1]) / 2.0)
        };
        let cal = table
            .get(base)
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
        NoiseModel::new(
            pick(cal.single_qubit_error_range),
            pick(cal.two_qubit_error_range),
            1.0,
        )
    }

    /// Names of the midpoint presets.
    pub fn preset_names() -> Vec<String> {
        let table: BTreeMap<String, Calibration> =
            serde_json::from_str(CALIBRATION_JSON).expect("shipped calibration parses");
        table.into_keys().collect()
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        NoiseModel::new(self.single_qubit_error, self.two_qubit_error, scale)
    }

    /// Effective per-gate probability for a gate touching `arity` qubits.
    pub fn probability(&self, arity: usize) -> f64 {
        let p = if arity >= 2 {
            self.two_qubit_error
        } else {
            self.single_qubit_error
        };
        (p * self.scale).min(1.0)
    }

    pub fn is_noiseless(&self) -> bool {
        self.probability(1) == 0.0 && self.probability(2) == 0.0
    }
}

/// Parses `preset[:scale]`, e.g. `ibmqx2-2020-03-28:2`.
impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, scale) = match s.rsplit_once(':') {
            Some((n, sc)) => {
                let scale: f64 = sc
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad noise scale {sc:?}")))?;
                (n, scale)
            }
            None => (s, 1.0),
        };
        NoiseModel::preset(name)?.with_scale(scale)
    }
}

fn apply_pauli<R: Rng>(state: &mut StateVector, q: usize, rng: &mut R) -> Result<()> {
    let g = match rng.random_range(0..3u8) {
        0 => Gate::X,
        1 => Gate::Y,
        _ => Gate::Z,
    };
    state.apply(&GateOp::single(g, q))
}

/// Samples the measured qubits of a lowered circuit under `model`.
///
/// With a noiseless model this is exactly [`sample`] of the ideal final state
/// with the same seed.
pub fn noisy_run(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if let Some(op) = circuit
        .ops()
        .iter()
        .find(|op| !BasisGateSet::default().allows(op))
    {
        return Err(Error::UnloweredGate(op.to_string()));
    }
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let measured = circuit.measured_qubits().to_vec();
    if measured.is_empty() {
        return Err(Error::EmptyQubitSet);
    }
    let mut ideal = StateVector::zero(circuit.num_qubits())?;
    if model.is_noiseless() {
        ideal.run(circuit)?;
        return sample(&ideal, &measured, shots, seed);
    }

    let ops = circuit.ops();
    let cache_prefixes = ops.len().saturating_mul(1 << circuit.num_qubits()) <= PREFIX_CACHE_LIMIT;
    // prefixes[i] is the ideal state after ops[..i]
    let mut prefixes = Vec::new();
    if cache_prefixes {
        prefixes.push(ideal.clone());
    }
    for op in ops {
        ideal.apply(op)?;
        if cache_prefixes {
            prefixes.push(ideal.clone());
        }
    }
    let ideal_sampler = CdfSampler::new(&ideal.marginal(&measured)?);

    let values: Vec<usize> = (0..shots)
        .into_par_iter()
        .map(|shot| -> Result<usize> {
            let mut rng = rng::stream(seed, shot);
            // Error events are drawn up front; shots with none reuse the ideal state.
            let events: Vec<usize> = (0..ops.len())
                .filter(|&i| rng.random::<f64>() < model.probability(ops[i].arity()))
                .collect();
            let Some(&first) = events.first() else {
                return Ok(ideal_sampler.draw(&mut rng));
            };
            let mut state = if cache_prefixes {
                prefixes[first + 1].clone()
            } else {
                let mut s = StateVector::zero(circuit.num_qubits())?;
                for op in &ops[..=first] {
                    s.apply(op)?;
                }
                s
            };
            let mut next = events.iter().peekable();
            for (i, op) in ops.iter().enumerate().skip(first) {
                if i > first {
                    state.apply(op)?;
                }
                if next.peek() == Some(&&i) {
                    next.next();
                    for q in op.qubits() {
                        apply_pauli(&mut state, q, &mut rng)?;
                    }
                }
            }
            Ok(CdfSampler::new(&state.marginal(&measured)?).draw(&mut rng))
        })
        .collect::<Result<_>>()?;

    let mut hist = vec![0u64; 1 << measured.len()];
    for v in values {
        hist[v] += 1;
    }
    Ok(MeasurementRecord::from_values(
        &measured, shots, seed, &hist,
    ))
}

/// MLQAE records from lowered schedule circuits under `model`. Circuit `k`
/// uses seed substream `k`.
pub fn noisy_mlqae(
    spec: &ProblemSpec,
    schedule: &Schedule,
    shots_per_circuit: u64,
    seed: u64,
    model: &NoiseModel,
) -> Result<Vec<ShotRecord>> {
    let basis = BasisGateSet::default();
    schedule_circuits(spec, schedule)
        .iter()
        .zip(&schedule.powers)
        .enumerate()
        .map(|(k, (c, &power))| {
            let lowered = lower(c, &basis)?;
            let rec = noisy_run(
                &lowered,
                model,
                shots_per_circuit,
                rng::substream(seed, k as u64),
            )?;
            ShotRecord::new(power, shots_per_circuit, rec.count("1"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlqae::{build_schedule, ScheduleKind};

    fn bell() -> Circuit {
        let mut c = Circuit::new(2);
        c.add(GateOp::single(Gate::U2(0.0, std::f64::consts::PI), 0));
        c.add(GateOp::cnot(0, 1));
        c.set_measured(vec![0, 1]).unwrap();
        c
    }

    #[test]
    fn presets() {
        let m = NoiseModel::preset("ibmqx2-2020-03-28").unwrap();
        assert!((m.single_qubit_error - 7.761e-4).abs() < 1e-12);
        assert!((m.two_qubit_error - 2.0615e-2).abs() < 1e-12);
        let v = NoiseModel::preset("vigo-2020-03-28").unwrap();
        assert!((v.single_qubit_error - 5.092e-4).abs() < 1e-12);
        assert!((v.two_qubit_error - 9.166e-3).abs() < 1e-12);
        let lo = NoiseModel::preset("vigo-2020-03-28-min").unwrap();
        assert_eq!(lo.two_qubit_error, 7.252e-3);
        let scaled: NoiseModel = "ibmqx2-2020-03-28:2".parse().unwrap();
        assert_eq!(scaled.scale, 2.0);
        assert!("tokyo".parse::<NoiseModel>().is_err());
        assert!(NoiseModel::new(0.6, 0.0, 1.0).is_err());
        assert!(NoiseModel::new(0.1, 0.1, -1.0).is_err());
        assert_eq!(NoiseModel::preset_names().len(), 2);
    }

    #[test]
    fn zero_scale_matches_ideal_sampling() {
        let model = NoiseModel::preset("ibmqx2-2020-03-28")
            .unwrap()
            .with_scale(0.0)
            .unwrap();
        let c = bell();
        let noisy = noisy_run(&c, &model, 2000, 11).unwrap();
        let mut s = StateVector::zero(2).unwrap();
        s.run(&c).unwrap();
        assert_eq!(noisy, sample(&s, &[0, 1], 2000, 11).unwrap());
    }

    #[test]
    fn rejects_unlowered() {
        let mut c = Circuit::new(2);
        c.add(GateOp::h(0));
        c.set_measured(vec![0]).unwrap();
        assert!(matches!(
            noisy_run(&c, &NoiseModel::noiseless(), 10, 1),
            Err(Error::UnloweredGate(_))
        ));
    }

    #[test]
    fn noise_breaks_bell_correlations() {
        let model = NoiseModel::new(0.2, 0.3, 1.0).unwrap();
        let r = noisy_run(&bell(), &model, 4000, 2).unwrap();
        assert!(r.count("01") + r.count("10") > 200);
        let ideal = noisy_run(&bell(), &NoiseModel::noiseless(), 4000, 2).unwrap();
        assert_eq!(ideal.count("01") + ideal.count("10"), 0);
        assert_eq!(r, noisy_run(&bell(), &model, 4000, 2).unwrap());
    }

    #[test]
    fn saturated_noise_randomizes_flag() {
        let spec = ProblemSpec::parse(2, "01").unwrap();
        let sched = build_schedule(ScheduleKind::Eis, 3).unwrap();
        let model = NoiseModel::new(0.5, 0.5, 1.0).unwrap();
        let recs = noisy_mlqae(&spec, &sched, 4000, 5, &model).unwrap();
        let last = recs.last().unwrap();
        let rate = last.hits as f64 / last.shots as f64;
        assert!((rate - 0.5).abs() < 0.05, "rate {rate}");
    }
}
