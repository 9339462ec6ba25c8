//! Canonical amplitude estimation by phase estimation over `Q`.
//!
//! Layout: domain qubits `0..n`, flag `n`, ancillae `n+1 ..= n+m`. Ancilla `j`
//! controls `2^j` consecutive copies of `Q`, and the measured integer `y` has
//! bit `j` on ancilla `j`.
//!
//! `Q` acts on the good/bad plane as `−R(2θ)`, so the controlled unitary fed to
//! phase estimation is `−Q` with eigenvalues `e^{±2iθ}`. The sign only matters
//! for ancilla 0 (it controls an odd power), where it becomes a `Z`. A reading
//! `y` gives `θ̂ = π·y/2^m`, and `y`, `2^m − y` fold to the same angle in
//! `[0, π/2]`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qaa::{build_a, build_q, ProblemSpec};
use crate::statevec::{bitstring, sample, Circuit, Gate, GateOp, StateVector, MAX_QUBITS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CQAEConfig {
    pub ancillae: usize,
    pub spec: ProblemSpec,
    pub shots: u64,
    pub seed: u64,
}

impl CQAEConfig {
    pub fn new(spec: ProblemSpec, ancillae: usize, shots: u64, seed: u64) -> Self {
        CQAEConfig {
            ancillae,
            spec,
            shots,
            seed,
        }
    }

    pub fn ancilla_qubits(&self) -> Vec<usize> {
        let base = self.spec.num_qubits();
        (base..base + self.ancillae).collect()
    }

    pub fn total_qubits(&self) -> usize {
        self.spec.num_qubits() + self.ancillae
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CQAEResult {
    pub ancillae: usize,
    /// Sampled counts keyed by ancilla bitstring. Empty in exact mode.
    pub histogram: BTreeMap<String, u64>,
    /// Exact ancilla distribution, present in exact mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<BTreeMap<String, f64>>,
    /// Modal reading.
    pub measured: u64,
    pub theta_estimate: f64,
    pub amplitude_estimate: f64,
}

impl CQAEResult {
    /// Probability (exact mode) or frequency of readings that fold to `theta`.
    pub fn mass_at_theta(&self, theta: f64) -> f64 {
        let m = self.ancillae;
        let matches = |key: &str| {
            let y = u64::from_str_radix(key, 2).expect("bitstring key");
            (readout_theta(y, m) - theta).abs() < 1e-9
        };
        match &self.distribution {
            Some(d) => d.iter().filter(|(k, _)| matches(k)).map(|(_, p)| p).sum(),
            None => {
                let total: u64 = self.histogram.values().sum();
                let hits: u64 = self
                    .histogram
                    .iter()
                    .filter(|(k, _)| matches(k))
                    .map(|(_, c)| c)
                    .sum();
                hits as f64 / total.max(1) as f64
            }
        }
    }
}

/// Folded angle for reading `y` on `m` ancillae, in `[0, π/2]`.
pub fn readout_theta(y: u64, m: usize) -> f64 {
    let t = PI * y as f64 / (1u64 << m) as f64;
    if t > PI / 2.0 {
        PI - t
    } else {
        t
    }
}

/// Inverse QFT with integer bit `b` on `qubits[b]`, on a register just wide
/// enough for the largest index.
pub fn inverse_qft(qubits: &[usize]) -> Result<Circuit> {
    let width = qubits.iter().max().ok_or(Error::EmptyQubitSet)? + 1;
    let mut c = Circuit::new(width);
    for op in inverse_qft_ops(qubits) {
        c.push(op)?;
    }
    Ok(c)
}

fn qft_ops(qubits: &[usize]) -> Vec<GateOp> {
    let m = qubits.len();
    let mut ops = Vec::new();
    for i in (0..m).rev() {
        ops.push(GateOp::h(qubits[i]));
        for j in (0..i).rev() {
            let angle = PI / (1u64 << (i - j)) as f64;
            ops.push(GateOp::controlled(
                Gate::Phase(angle),
                &[qubits[j]],
                qubits[i],
            ));
        }
    }
    for k in 0..m / 2 {
        ops.push(GateOp::swap(qubits[k], qubits[m - 1 - k]));
    }
    ops
}

pub(crate) fn inverse_qft_ops(qubits: &[usize]) -> Vec<GateOp> {
    qft_ops(qubits).iter().rev().map(GateOp::inverse).collect()
}

/// Full phase-estimation circuit with the ancillae measured.
pub fn build_cqae_circuit(config: &CQAEConfig) -> Result<Circuit> {
    let m = config.ancillae;
    if m == 0 {
        return Err(Error::InvalidArgument(
            "at least one ancilla is required".into(),
        ));
    }
    let total = config.total_qubits();
    if total > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: total,
            cap: MAX_QUBITS,
        });
    }
    let a_op = build_a(&config.spec);
    let q_op = build_q(&a_op);
    let ancillae = config.ancilla_qubits();

    let mut c = Circuit::new(total);
    c.extend(ancillae.iter().map(|&q| GateOp::h(q)));
    c.extend(a_op.circuit.ops().iter().cloned());
    // −Q on ancilla 0: the sign is a phase kicked onto the control.
    c.add(GateOp::z(ancillae[0]));
    for (j, &anc) in ancillae.iter().enumerate() {
        let controlled: Vec<GateOp> = q_op
            .circuit
            .ops()
            .iter()
            .map(|op| op.with_control(anc))
            .collect();
        for _ in 0..1u64 << j {
            c.extend(controlled.iter().cloned());
        }
    }
    c.extend(inverse_qft_ops(&ancillae));
    c.set_measured(ancillae)?;
    Ok(c)
}

/// Number of controlled-`Q` blocks per ancilla, found by counting each block's
/// leading controlled `S_χ`.
pub fn controlled_q_counts(config: &CQAEConfig, circuit: &Circuit) -> Vec<usize> {
    let flag = config.spec.flag_qubit();
    config
        .ancilla_qubits()
        .iter()
        .map(|&anc| {
            circuit
                .ops()
                .iter()
                .filter(|op| op.gate == Gate::Z && op.targets == [flag] && op.controls == [anc])
                .count()
        })
        .collect()
}

/// Exact ancilla distribution indexed by the reading `y`.
pub fn exact_distribution(config: &CQAEConfig) -> Result<Vec<f64>> {
    let circuit = build_cqae_circuit(config)?;
    let mut state = StateVector::zero(circuit.num_qubits())?;
    state.run(&circuit)?;
    state.marginal(circuit.measured_qubits())
}

/// Modal reading; ties go to the smaller folded angle, then the smaller `y`.
fn modal_reading(weights: impl Iterator<Item = (u64, f64)>, m: usize) -> u64 {
    let mut best: Option<(u64, f64)> = None;
    for (y, w) in weights {
        best = match best {
            None => Some((y, w)),
            Some((by, bw)) => {
                let better = w > bw + 1e-12
                    || ((w - bw).abs() <= 1e-12
                        && readout_theta(y, m) < readout_theta(by, m) - 1e-12);
                if better {
                    Some((y, w))
                } else {
                    Some((by, bw))
                }
            }
        };
    }
    best.map(|(y, _)| y).unwrap_or(0)
}

fn result_from(
    ancillae: usize,
    y: u64,
    histogram: BTreeMap<String, u64>,
    distribution: Option<BTreeMap<String, f64>>,
) -> CQAEResult {
    let theta = readout_theta(y, ancillae);
    CQAEResult {
        ancillae,
        histogram,
        distribution,
        measured: y,
        theta_estimate: theta,
        amplitude_estimate: theta.sin().powi(2),
    }
}

/// Simulates, samples the ancillae `shots` times and reads the modal `y`.
pub fn run_cqae(config: &CQAEConfig) -> Result<CQAEResult> {
    if config.shots == 0 {
        return Err(Error::ZeroShots);
    }
    let circuit = build_cqae_circuit(config)?;
    let mut state = StateVector::zero(circuit.num_qubits())?;
    state.run(&circuit)?;
    let record = sample(&state, circuit.measured_qubits(), config.shots, config.seed)?;
    let y = modal_reading(
        record.values().into_iter().map(|(v, c)| (v, c as f64)),
        config.ancillae,
    );
    Ok(result_from(config.ancillae, y, record.counts, None))
}

/// Like [`run_cqae`] but reads the mode of the exact distribution.
pub fn run_cqae_exact(config: &CQAEConfig) -> Result<CQAEResult> {
    let probs = exact_distribution(config)?;
    let m = config.ancillae;
    let y = modal_reading(probs.iter().enumerate().map(|(y, &p)| (y as u64, p)), m);
    let distribution = probs
        .iter()
        .enumerate()
        .map(|(y, &p)| (bitstring(y as u64, m), p))
        .collect();
    Ok(result_from(m, y, BTreeMap::new(), Some(distribution)))
}
