//! Statevector kernel against the dense-matrix oracle.

use num_complex::Complex64;
use proptest::prelude::*;

use qae_core::oracle::{op_matrix, random_circuit, unitary};
use qae_core::statevec::{run_circuit, sample, Circuit, Gate, GateOp, StateVector};

fn random_state(n: usize, raw: &[(f64, f64)]) -> StateVector {
    let amps: Vec<Complex64> = raw[..1 << n]
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps = amps.into_iter().map(|a| a / norm).collect();
    StateVector::from_amplitudes(amps).unwrap()
}

fn amp_vec() -> impl Strategy<Value = Vec<(f64, f64)>> {
    // The constant offset keeps the norm away from zero.
    prop::collection::vec((0.1..1.0f64, -1.0..1.0f64), 16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn run_matches_matrix_chain(n in 1usize..=4, ops in 0usize..=30, seed: u64, raw in amp_vec()) {
        let c = random_circuit(n, ops, seed);
        let input = random_state(n, &raw);
        let out = run_circuit(&c, &input).unwrap();
        let u = unitary(&c);
        for (row, got) in out.amplitudes().iter().enumerate() {
            let want: Complex64 = (0..1 << n).map(|col| u.get(row, col) * input.amplitude(col)).sum();
            prop_assert!((got - want).norm() < 1e-9);
        }
    }

    #[test]
    fn every_gate_preserves_norm(n in 1usize..=4, seed: u64, raw in amp_vec()) {
        let mut state = random_state(n, &raw);
        for op in random_circuit(n, 30, seed).ops() {
            state.apply(op).unwrap();
            prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn controls_off_means_identity(seed: u64, raw in amp_vec()) {
        // Zero out every amplitude whose control bit is set, then any gate
        // controlled by that qubit must leave the state untouched.
        let n = 4;
        let control = (seed % 4) as usize;
        let mut amps: Vec<Complex64> = raw.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        for (i, a) in amps.iter_mut().enumerate() {
            if (i >> control) & 1 == 1 {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let state = StateVector::from_amplitudes(amps.iter().map(|a| a / norm).collect()).unwrap();
        for op in random_circuit(n, 20, seed).ops() {
            if op.qubits().any(|q| q == control) {
                continue;
            }
            let controlled = op.with_control(control);
            let mut s = state.clone();
            s.apply(&controlled).unwrap();
            for (a, b) in s.amplitudes().iter().zip(state.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_seeded(seed: u64, shots in 1u64..2000) {
        let c = random_circuit(3, 12, seed);
        let s = run_circuit(&c, &StateVector::zero(3).unwrap()).unwrap();
        let a = sample(&s, &[0, 2], shots, seed).unwrap();
        let b = sample(&s, &[0, 2], shots, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.counts.values().sum::<u64>(), shots);
    }
}

#[test]
fn gate_matrices_agree_with_kernel_on_basis_inputs() {
    let gates = [
        Gate::X,
        Gate::Y,
        Gate::Z,
        Gate::H,
        Gate::S,
        Gate::Sdg,
        Gate::T,
        Gate::Tdg,
        Gate::Rz(0.3),
        Gate::Phase(-1.1),
        Gate::U1(2.0),
        Gate::U2(0.4, -0.9),
        Gate::U3(1.3, 0.2, 2.5),
    ];
    for gate in gates {
        let op = GateOp::controlled(gate, &[2], 0);
        let m = op_matrix(&op, 3);
        for x in 0..8 {
            let mut s = StateVector::basis(3, x).unwrap();
            s.apply(&op).unwrap();
            for (row, a) in s.amplitudes().iter().enumerate() {
                assert!((a - m.get(row, x)).norm() < 1e-12, "{gate:?} on |{x}⟩");
            }
        }
    }
}

#[test]
fn bell_pair_statistics() {
    let mut c = Circuit::new(2);
    c.extend([GateOp::h(0), GateOp::cnot(0, 1)]);
    let s = run_circuit(&c, &StateVector::zero(2).unwrap()).unwrap();
    let rec = sample(&s, &[0, 1], 10_000, 42).unwrap();
    assert_eq!(rec.count("01") + rec.count("10"), 0);
    let p = rec.count("11") as f64 / 10_000.0;
    // Five standard deviations of a fair coin over 10⁴ draws.
    assert!((p - 0.5).abs() < 0.025, "p = {p}");
}
