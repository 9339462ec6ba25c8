//! State preparation `A` and the amplification operator `Q = A·S₀·A⁻¹·S_χ`
//! for a marked-basis-state problem.
//!
//! Register layout: domain qubits `0..n`, flag qubit `n` (the most significant).
//! The gate sequences are pinned by [`RECIPE_VERSION`] and described in
//! `docs/circuit_recipes.md`; the logical depth figures depend on them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{Circuit, Gate, GateOp, StateVector, MAX_QUBITS};

/// Version tag of the A / Q gate recipes below.
pub const RECIPE_VERSION: &str = "recipes/v1";

/// Domain size and marked ("good") basis states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    num_domain_qubits: usize,
    good_states: BTreeSet<usize>,
}

impl ProblemSpec {
    pub fn new(
        num_domain_qubits: usize,
        good_states: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if num_domain_qubits == 0 || num_domain_qubits + 1 > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_domain_qubits + 1,
                cap: MAX_QUBITS,
            });
        }
        let good_states: BTreeSet<usize> = good_states.into_iter().collect();
        if let Some(&bad) = good_states.iter().find(|&&g| g >> num_domain_qubits != 0) {
            return Err(Error::InvalidGoodState {
                state: bad,
                num_qubits: num_domain_qubits,
            });
        }
        Ok(ProblemSpec {
            num_domain_qubits,
            good_states,
        })
    }

    /// Good states as bitstrings, most significant qubit on the left (`"01"` is index 1).
    pub fn from_bitstrings<S: AsRef<str>>(num_domain_qubits: usize, good: &[S]) -> Result<Self> {
        let states = good
            .iter()
            .map(|s| {
                let s = s.as_ref().trim();
                if s.len() != num_domain_qubits || !s.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(Error::InvalidBitstring(s.to_string()));
                }
                Ok(usize::from_str_radix(s, 2).expect("checked binary digits"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_domain_qubits, states)
    }

    /// Parses a comma-separated list such as `"01,11"`; an empty string means no good states.
    pub fn parse(num_domain_qubits: usize, list: &str) -> Result<Self> {
        let items: Vec<&str> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        Self::from_bitstrings(num_domain_qubits, &items)
    }

    pub fn num_domain_qubits(&self) -> usize {
        self.num_domain_qubits
    }

    /// Domain qubits plus the flag.
    pub fn num_qubits(&self) -> usize {
        self.num_domain_qubits + 1
    }

    pub fn flag_qubit(&self) -> usize {
        self.num_domain_qubits
    }

    pub fn good_states(&self) -> &BTreeSet<usize> {
        &self.good_states
    }

    pub fn domain_size(&self) -> usize {
        1 << self.num_domain_qubits
    }

    pub fn num_good(&self) -> usize {
        self.good_states.len()
    }

    /// `a = k / N`.
    pub fn amplitude(&self) -> f64 {
        self.num_good() as f64 / self.domain_size() as f64
    }

    /// `θ = arcsin(√a)` in `[0, π/2]`.
    pub fn theta(&self) -> f64 {
        self.amplitude().sqrt().clamp(0.0, 1.0).asin()
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num_domain_qubits;
        let good: Vec<String> = self
            .good_states
            .iter()
            .map(|&g| crate::statevec::bitstring(g as u64, n))
            .collect();
        write!(f, "n={n}, good={{{}}}", good.join(","))
    }
}

/// State-preparation circuit on `n + 1` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct AOperator {
    pub circuit: Circuit,
    pub spec: ProblemSpec,
}

/// `Q` and its four factors, listed in application order.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverOperator {
    pub circuit: Circuit,
    pub s_chi: Circuit,
    pub a_inverse: Circuit,
    pub s_zero: Circuit,
    pub a: Circuit,
}

impl GroverOperator {
    /// Factors in the order they act on the state.
    pub fn components(&self) -> [(&'static str, &Circuit); 4] {
        [
            ("S_chi", &self.s_chi),
            ("A_inv", &self.a_inverse),
            ("S_0", &self.s_zero),
            ("A", &self.a),
        ]
    }
}

/// Hadamards on the domain, then one X-conjugated multi-controlled NOT onto the
/// flag per good state.
pub fn build_a(spec: &ProblemSpec) -> AOperator {
    let n = spec.num_domain_qubits();
    let flag = spec.flag_qubit();
    let domain: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(spec.num_qubits());
    c.extend(domain.iter().map(|&q| GateOp::h(q)));
    for &good in spec.good_states() {
        let flips: Vec<usize> = domain
            .iter()
            .copied()
            .filter(|&q| (good >> q) & 1 == 0)
            .collect();
        c.extend(flips.iter().map(|&q| GateOp::x(q)));
        c.add(GateOp::mcx(&domain, flag));
        c.extend(flips.iter().map(|&q| GateOp::x(q)));
    }
    AOperator {
        circuit: c,
        spec: spec.clone(),
    }
}

pub fn build_a_inverse(a_op: &AOperator) -> Circuit {
    a_op.circuit.inverse()
}

/// `S_χ`: Z on the flag, a −1 on every flagged basis state.
pub fn s_chi(spec: &ProblemSpec) -> Circuit {
    let mut c = Circuit::new(spec.num_qubits());
    c.add(GateOp::z(spec.flag_qubit()));
    c
}

/// `S₀ = I − 2|0⟩⟨0|` over all `num_qubits` qubits.
///
/// Realized as X on every qubit, a Z on the last qubit controlled by all the
/// others, then X again. That product is exactly `I − 2|0⟩⟨0|` (no extra
/// global phase), so `Q` below matches `A·S₀·A⁻¹·S_χ` as a matrix.
pub fn s_zero(num_qubits: usize) -> Circuit {
    let mut c = Circuit::new(num_qubits);
    let last = num_qubits - 1;
    let controls: Vec<usize> = (0..last).collect();
    c.extend((0..num_qubits).map(GateOp::x));
    if controls.is_empty() {
        c.add(GateOp::z(last));
    } else {
        c.add(GateOp::controlled(Gate::Z, &controls, last));
    }
    c.extend((0..num_qubits).map(GateOp::x));
    c
}

/// `Q = A·S₀·A⁻¹·S_χ`, so the circuit applies S_χ first and A last.
///
/// With this sign convention `Q` restricted to the good/bad plane is minus a
/// rotation by 2θ, i.e. `Qᵐ A|0⟩ = (−1)ᵐ [cos((2m+1)θ)|ψ₀⟩|0⟩ + sin((2m+1)θ)|ψ₁⟩|1⟩]`.
/// The sign is a global phase for measurement statistics; phase estimation
/// compensates for it explicitly.
pub fn build_q(a_op: &AOperator) -> GroverOperator {
    let spec = &a_op.spec;
    let s_chi = s_chi(spec);
    let a_inverse = build_a_inverse(a_op);
    let s_zero = s_zero(spec.num_qubits());
    let a = a_op.circuit.clone();
    let mut circuit = Circuit::new(spec.num_qubits());
    for part in [&s_chi, &a_inverse, &s_zero, &a] {
        circuit.extend(part.ops().iter().cloned());
    }
    GroverOperator {
        circuit,
        s_chi,
        a_inverse,
        s_zero,
        a,
    }
}

/// `Qᵐ · A |0⟩_{n+1}`.
pub fn apply_q_power(a_op: &AOperator, q_op: &GroverOperator, m: usize) -> Result<StateVector> {
    let mut state = StateVector::zero(a_op.spec.num_qubits())?;
    state.run(&a_op.circuit)?;
    for _ in 0..m {
        state.run(&q_op.circuit)?;
    }
    Ok(state)
}

/// Circuit `Qᵐ·A` with the flag measured.
pub fn amplified_circuit(a_op: &AOperator, q_op: &GroverOperator, m: usize) -> Circuit {
    let mut c = a_op.circuit.clone();
    for _ in 0..m {
        c.extend(q_op.circuit.ops().iter().cloned());
    }
    c.set_measured(vec![a_op.spec.flag_qubit()])
        .expect("flag qubit is in range");
    c
}

/// `sin²((2m+1)·θ)`, the probability of reading the flag as 1 after `Qᵐ A`.
pub fn analytic_success_probability(spec: &ProblemSpec, m: usize) -> f64 {
    success_probability_at(spec.theta(), m)
}

pub(crate) fn success_probability_at(theta: f64, m: usize) -> f64 {
    ((2 * m + 1) as f64 * theta).sin().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    fn reference_instance() -> ProblemSpec {
        ProblemSpec::from_bitstrings(2, &["01"]).unwrap()
    }

    #[test]
    fn spec_parameters() {
        let spec = reference_instance();
        assert_eq!(
            spec.good_states().iter().copied().collect::<Vec<_>>(),
            vec![1]
        );
        assert!((spec.amplitude() - 0.25).abs() < 1e-15);
        assert!((spec.theta() - FRAC_PI_6).abs() < 1e-12);
        assert_eq!(spec.to_string(), "n=2, good={01}");
    }

    #[test]
    fn spec_rejects_bad_input() {
        assert!(ProblemSpec::new(2, [4]).is_err());
        assert!(ProblemSpec::from_bitstrings(2, &["011"]).is_err());
        assert!(ProblemSpec::from_bitstrings(2, &["0a"]).is_err());
        assert!(ProblemSpec::new(0, []).is_err());
        assert_eq!(ProblemSpec::parse(3, "").unwrap().num_good(), 0);
    }

    #[test]
    fn a_prepares_flagged_uniform_superposition() {
        let spec = reference_instance();
        let a = build_a(&spec);
        let state = apply_q_power(&a, &build_q(&a), 0).unwrap();
        assert!((state.probability_of(2, true).unwrap() - 0.25).abs() < 1e-12);
        // |01⟩|1⟩ = index 0b101
        assert!((state.amplitude(0b101).re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_good_set_leaves_flag_clear() {
        let spec = ProblemSpec::new(2, []).unwrap();
        let a = build_a(&spec);
        let q = build_q(&a);
        let s0 = apply_q_power(&a, &q, 0).unwrap();
        assert!(s0.probability_of(2, false).unwrap() > 1.0 - 1e-12);
        let s1 = apply_q_power(&a, &q, 1).unwrap();
        assert!(s0.approx_eq_up_to_phase(&s1, 1e-12));
    }

    #[test]
    fn three_good_of_eight() {
        let spec = ProblemSpec::from_bitstrings(3, &["011", "101", "110"]).unwrap();
        let a = build_a(&spec);
        let state = apply_q_power(&a, &build_q(&a), 0).unwrap();
        assert!((state.probability_of(3, true).unwrap() - 3.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn amplified_probabilities_for_reference_instance() {
        let spec = reference_instance();
        let a = build_a(&spec);
        let q = build_q(&a);
        for (m, want) in [(0, 0.25), (1, 1.0), (2, 0.25), (4, 1.0)] {
            let p = apply_q_power(&a, &q, m)
                .unwrap()
                .probability_of(2, true)
                .unwrap();
            assert!((p - want).abs() < 1e-9, "m={m}: {p}");
            assert!((analytic_success_probability(&spec, m) - want).abs() < 1e-9);
        }
    }

    #[test]
    fn a_inverse_undoes_a() {
        let spec = reference_instance();
        let a = build_a(&spec);
        let mut s = StateVector::zero(3).unwrap();
        s.run(&a.circuit).unwrap();
        s.run(&build_a_inverse(&a)).unwrap();
        assert!((s.amplitude(0).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn components_are_in_application_order() {
        let a = build_a(&reference_instance());
        let q = build_q(&a);
        let names: Vec<_> = q.components().iter().map(|(n, _)| *n).collect();
        assert_eq!(names, ["S_chi", "A_inv", "S_0", "A"]);
        let total: usize = q.components().iter().map(|(_, c)| c.len()).sum();
        assert_eq!(total, q.circuit.len());
        assert_eq!(q.circuit.ops()[0], GateOp::z(2));
    }

    #[test]
    fn s_zero_flips_only_all_zeros() {
        let s0 = s_zero(3);
        for x in 0..8 {
            let mut s = StateVector::basis(3, x).unwrap();
            s.run(&s0).unwrap();
            let want = if x == 0 { -1.0 } else { 1.0 };
            assert!((s.amplitude(x).re - want).abs() < 1e-12, "x={x}");
        }
    }
}
