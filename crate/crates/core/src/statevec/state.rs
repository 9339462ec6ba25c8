use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::gate::{Gate, GateOp};
use crate::error::{Error, Result};
use crate::rng;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 14;

/// Dense `2^n` amplitude vector. Qubit `q` is bit `q` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_cap(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::QubitOutOfRange {
                index,
                num_qubits: dim,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Wraps raw amplitudes; the vector must be a normalized power-of-two length.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_cap(num_qubits)?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `op` in place.
    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        let cmask = op.controls.iter().fold(0usize, |m, &c| m | (1 << c));
        match op.gate.matrix() {
            Some(m) => {
                let tbit = 1usize << op.targets[0];
                for i in 0..self.amps.len() {
                    if i & tbit == 0 && i & cmask == cmask {
                        let j = i | tbit;
                        let (a, b) = (self.amps[i], self.amps[j]);
                        self.amps[i] = m[0][0] * a + m[0][1] * b;
                        self.amps[j] = m[1][0] * a + m[1][1] * b;
                    }
                }
            }
            None => {
                debug_assert_eq!(op.gate, Gate::Swap);
                let (b0, b1) = (1usize << op.targets[0], 1usize << op.targets[1]);
                for i in 0..self.amps.len() {
                    if i & b0 != 0 && i & b1 == 0 && i & cmask == cmask {
                        self.amps.swap(i, i ^ b0 ^ b1);
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies every op of `circuit` in order.
    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                circuit: circuit.num_qubits(),
                state: self.num_qubits,
            });
        }
        for op in circuit.ops() {
            self.apply(op)?;
        }
        Ok(())
    }

    /// Exact probability that `qubit` reads `value`.
    pub fn probability_of(&self, qubit: usize, value: bool) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        let p: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & bit != 0) == value)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Marginal distribution over `qubits`; entry `v` has bit `k` equal to the
    /// value read on `qubits[k]`.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        if qubits.is_empty() {
            return Err(Error::EmptyQubitSet);
        }
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let v = qubits
                .iter()
                .enumerate()
                .fold(0usize, |v, (k, &q)| v | (((i >> q) & 1) << k));
            out[v] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Equality up to one global phase factor, per amplitude within `tol`.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.num_qubits != other.num_qubits {
            return false;
        }
        let overlap = self.inner(other);
        if overlap.norm() < 1e-12 {
            return false;
        }
        let phase = overlap / overlap.norm();
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a * phase - b).norm() <= tol)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }
}

fn check_cap(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: num_qubits,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Returns `op` applied to a copy of `state`.
pub fn apply_gate(state: &StateVector, op: &GateOp) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(op)?;
    Ok(out)
}

/// Runs `circuit` on a copy of `initial`. No sampling happens here.
pub fn run_circuit(circuit: &Circuit, initial: &StateVector) -> Result<StateVector> {
    let mut out = initial.clone();
    out.run(circuit)?;
    Ok(out)
}

/// Outcome counts of repeated measurement of a fixed set of qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub shots: u64,
    pub seed: u64,
    /// Measured qubits; `qubits[k]` is the k-th character from the right of each key.
    pub qubits: Vec<usize>,
    pub counts: BTreeMap<String, u64>,
}

impl MeasurementRecord {
    pub(crate) fn from_values(qubits: &[usize], shots: u64, seed: u64, values: &[u64]) -> Self {
        let mut counts = BTreeMap::new();
        for (v, &c) in values.iter().enumerate() {
            if c > 0 {
                counts.insert(bitstring(v as u64, qubits.len()), c);
            }
        }
        MeasurementRecord {
            shots,
            seed,
            qubits: qubits.to_vec(),
            counts,
        }
    }

    /// Count for a bitstring key (0 if never observed).
    pub fn count(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Count for an integer outcome.
    pub fn count_value(&self, value: u64) -> u64 {
        self.count(&bitstring(value, self.qubits.len()))
    }

    /// `(value, count)` pairs in ascending value order.
    pub fn values(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<_> = self
            .counts
            .iter()
            .map(|(k, &c)| (u64::from_str_radix(k, 2).unwrap_or(0), c))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Renders `value` as `width` bits, most significant on the left.
pub fn bitstring(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|k| if (value >> k) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Draws `shots` i.i.d. outcomes from the marginal on `qubits` by inverse CDF.
pub fn sample(
    state: &StateVector,
    qubits: &[usize],
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    let mut r = rng::stream(seed, 0);
    sample_with_rng(state, qubits, shots, seed, &mut r)
}

pub(crate) fn sample_with_rng<R: Rng>(
    state: &StateVector,
    qubits: &[usize],
    shots: u64,
    seed: u64,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = state.marginal(qubits)?;
    let sampler = CdfSampler::new(&probs);
    let mut values = vec![0u64; probs.len()];
    for _ in 0..shots {
        values[sampler.draw(rng)] += 1;
    }
    Ok(MeasurementRecord::from_values(qubits, shots, seed, &values))
}

/// Inverse-CDF sampler over a finite distribution.
pub(crate) struct CdfSampler {
    cdf: Vec<f64>,
    last_nonzero: usize,
}

impl CdfSampler {
    pub(crate) fn new(probs: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf: Vec<f64> = probs
            .iter()
            .map(|p| {
                acc += p.max(0.0);
                acc
            })
            .collect();
        let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        CdfSampler { cdf, last_nonzero }
    }

    pub(crate) fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().unwrap_or(&1.0);
        let u = rng.random::<f64>() * total;
        self.cdf.partition_point(|&c| c <= u).min(self.last_nonzero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pauli_and_hadamard_actions() {
        let zero = StateVector::zero(1).unwrap();
        let one = apply_gate(&zero, &GateOp::x(0)).unwrap();
        assert_eq!(one.amplitudes(), &[c(0.0), c(1.0)]);

        let plus = apply_gate(&zero, &GateOp::h(0)).unwrap();
        assert!((plus.amplitude(0) - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        assert!((plus.amplitude(1) - c(FRAC_1_SQRT_2)).norm() < 1e-12);

        let minus = apply_gate(&plus, &GateOp::z(0)).unwrap();
        assert!((minus.amplitude(0) - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        assert!((minus.amplitude(1) - c(-FRAC_1_SQRT_2)).norm() < 1e-12);
    }

    #[test]
    fn bell_state_and_empty_circuit() {
        let zero = StateVector::zero(2).unwrap();
        assert_eq!(run_circuit(&Circuit::new(2), &zero).unwrap(), zero);

        let mut bell = Circuit::new(2);
        bell.add(GateOp::h(0)).add(GateOp::cnot(0, 1));
        let out = run_circuit(&bell, &zero).unwrap();
        let r = FRAC_1_SQRT_2;
        for (i, want) in [r, 0.0, 0.0, r].into_iter().enumerate() {
            assert!((out.amplitude(i) - c(want)).norm() < 1e-12);
        }
    }

    #[test]
    fn errors_on_bad_indices_and_dimensions() {
        let s = StateVector::zero(2).unwrap();
        assert!(apply_gate(&s, &GateOp::x(2)).is_err());
        assert!(apply_gate(&s, &GateOp::cnot(1, 1)).is_err());
        assert!(matches!(
            run_circuit(&Circuit::new(3), &s),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(StateVector::zero(MAX_QUBITS + 1).is_err());
        assert!(matches!(sample(&s, &[], 10, 1), Err(Error::EmptyQubitSet)));
    }

    #[test]
    fn probability_of_plus_state() {
        let plus = apply_gate(&StateVector::zero(1).unwrap(), &GateOp::h(0)).unwrap();
        assert!((plus.probability_of(0, true).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn deterministic_outcome_sampling() {
        let one = StateVector::basis(1, 1).unwrap();
        let rec = sample(&one, &[0], 1024, 3).unwrap();
        assert_eq!(rec.count("1"), 1024);
        assert_eq!(rec.counts.len(), 1);
    }

    #[test]
    fn plus_state_rate_within_binomial_band() {
        // 10^5 shots, sd = 0.5/sqrt(1e5) = 0.00158; the band ±0.006 is ±3.8 sd.
        let plus = apply_gate(&StateVector::zero(1).unwrap(), &GateOp::h(0)).unwrap();
        for seed in 0..5 {
            let rec = sample(&plus, &[0], 100_000, seed).unwrap();
            let rate = rec.count("1") as f64 / 1e5;
            assert!((0.494..=0.506).contains(&rate), "seed {seed}: {rate}");
        }
    }

    #[test]
    fn bitstrings_are_msb_left() {
        assert_eq!(bitstring(1, 3), "001");
        assert_eq!(bitstring(6, 3), "110");
        let s = StateVector::basis(3, 0b110).unwrap();
        let rec = sample(&s, &[0, 1, 2], 10, 0).unwrap();
        assert_eq!(rec.count("110"), 10);
        // reordered readout: qubits[0] = 2 is the rightmost character
        let rec = sample(&s, &[2, 0], 10, 0).unwrap();
        assert_eq!(rec.count("01"), 10);
    }
}
