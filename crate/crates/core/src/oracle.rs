//! Reference implementations for verification: dense unitaries built from
//! explicit matrix elements, and seeded random circuits.
//!
//! Nothing here shares code with the statevector kernel, so agreement between
//! the two is meaningful. Sizes are limited to a handful of qubits.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::rng;
use crate::statevec::{Circuit, Gate, GateOp};
use crate::transpile::LoweredCircuit;

/// Row-major `2ⁿ × 2ⁿ` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        DenseMatrix { dim, data }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        DenseMatrix { dim: d, data }
    }

    /// Column `col` as a vector.
    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }
}

/// Full-register matrix of one op, element by element.
pub fn op_matrix(op: &GateOp, num_qubits: usize) -> DenseMatrix {
    let dim = 1usize << num_qubits;
    let bit = |x: usize, q: usize| (x >> q) & 1;
    let mut m = DenseMatrix {
        dim,
        data: vec![Complex64::new(0.0, 0.0); dim * dim],
    };
    for col in 0..dim {
        let active = op.controls.iter().all(|&c| bit(col, c) == 1);
        if !active {
            m.data[col * dim + col] = Complex64::new(1.0, 0.0);
            continue;
        }
        if op.gate == Gate::Swap {
            let (a, b) = (op.targets[0], op.targets[1]);
            let mut row = col & !(1 << a) & !(1 << b);
            row |= bit(col, a) << b | bit(col, b) << a;
            m.data[row * dim + col] = Complex64::new(1.0, 0.0);
            continue;
        }
        let t = op.targets[0];
        let g = op.gate.matrix().expect("single-qubit gate");
        for (out, g_row) in g.iter().enumerate() {
            let row = (col & !(1 << t)) | (out << t);
            m.data[row * dim + col] = g_row[bit(col, t)];
        }
    }
    m
}

/// Product of the op matrices, last op leftmost.
pub fn unitary(circuit: &Circuit) -> DenseMatrix {
    let n = circuit.num_qubits();
    circuit
        .ops()
        .iter()
        .fold(DenseMatrix::identity(1 << n), |acc, op| {
            op_matrix(op, n).mul(&acc)
        })
}

/// Phase `e^{iφ}` with `a ≈ e^{iφ}·b`, taken from the largest entry of `b`.
fn relative_phase(a: &[Complex64], b: &[Complex64]) -> Option<Complex64> {
    let (k, bk) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))?;
    if bk.norm() < 1e-12 {
        return None;
    }
    let r = a[k] / bk;
    Some(r / r.norm())
}

pub fn equal_up_to_phase(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> bool {
    if a.dim != b.dim {
        return false;
    }
    let Some(phase) = relative_phase(&a.data, &b.data) else {
        return false;
    };
    a.data
        .iter()
        .zip(&b.data)
        .all(|(x, y)| (x - phase * y).norm() < tol)
}

fn embed(logical: usize, layout: &[usize]) -> usize {
    layout
        .iter()
        .enumerate()
        .fold(0, |acc, (l, &p)| acc | (((logical >> l) & 1) << p))
}

/// Whether a routed circuit implements `original` up to one global phase:
/// basis input `x` enters through the initial layout, and the output is read
/// back through the final layout with idle physical qubits left in `|0⟩`.
pub fn routed_matches(original: &Circuit, routed: &LoweredCircuit, tol: f64) -> bool {
    let u_log = unitary(original);
    let u_phys = unitary(&routed.circuit);
    let n = original.num_qubits();
    let mut phase: Option<Complex64> = None;
    for x in 0..1usize << n {
        let col = u_phys.column(embed(x, &routed.initial_layout));
        let mut expected = vec![Complex64::new(0.0, 0.0); u_phys.dim];
        for y in 0..1usize << n {
            expected[embed(y, &routed.final_layout)] = u_log.get(y, x);
        }
        let ph = match phase {
            Some(p) => p,
            None => match relative_phase(&col, &expected) {
                Some(p) => *phase.insert(p),
                None => return false,
            },
        };
        if col
            .iter()
            .zip(&expected)
            .any(|(a, e)| (a - ph * e).norm() >= tol)
        {
            return false;
        }
    }
    true
}

/// Random circuit of `num_ops` ops drawn from the full gate vocabulary,
/// including multi-controlled gates and controlled SWAPs. All qubits are
/// measured.
pub fn random_circuit(num_qubits: usize, num_ops: usize, seed: u64) -> Circuit {
    let mut rng = rng::stream(seed, 0);
    let mut c = Circuit::new(num_qubits);
    let angle =
        |rng: &mut rng::StreamRng| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    for _ in 0..num_ops {
        let mut qubits: Vec<usize> = (0..num_qubits).collect();
        qubits.shuffle(&mut rng);
        let gate = match rng.random_range(0..14) {
            0 => Gate::X,
            1 => Gate::Y,
            2 => Gate::Z,
            3 => Gate::H,
            4 => Gate::S,
            5 => Gate::Sdg,
            6 => Gate::T,
            7 => Gate::Tdg,
            8 => Gate::Rz(angle(&mut rng)),
            9 => Gate::Phase(angle(&mut rng)),
            10 => Gate::U1(angle(&mut rng)),
            11 => Gate::U2(angle(&mut rng), angle(&mut rng)),
            12 => Gate::U3(angle(&mut rng), angle(&mut rng), angle(&mut rng)),
            _ => Gate::Swap,
        };
        let width = if gate == Gate::Swap { 2 } else { 1 };
        if width > num_qubits {
            continue;
        }
        let max_controls = num_qubits - width;
        // Bias toward few controls; about half the ops stay uncontrolled.
        let k = if max_controls == 0 || rng.random_bool(0.5) {
            0
        } else {
            rng.random_range(1..=max_controls)
        };
        let targets = qubits[..width].to_vec();
        let controls = qubits[width..width + k].to_vec();
        c.extend([GateOp::new(gate, targets, controls)]);
    }
    c.set_measured((0..num_qubits).collect()).expect("in range");
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::StateVector;

    #[test]
    fn cnot_matrix() {
        let u = unitary(&{
            let mut c = Circuit::new(2);
            c.extend([GateOp::cnot(0, 1)]);
            c
        });
        // |01⟩ (index 1, control set) ↦ |11⟩ (index 3)
        assert_eq!(u.get(3, 1), Complex64::new(1.0, 0.0));
        assert_eq!(u.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(u.get(2, 2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn agrees_with_statevector_kernel() {
        for seed in 0..20 {
            let c = random_circuit(4, 15, seed);
            let u = unitary(&c);
            for x in [0, 5, 15] {
                let mut s = StateVector::basis(4, x).unwrap();
                s.run(&c).unwrap();
                for (a, b) in s.amplitudes().iter().zip(u.column(x)) {
                    assert!((a - b).norm() < 1e-10, "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn phase_comparison() {
        let mut c = Circuit::new(1);
        c.extend([GateOp::single(Gate::Rz(0.4), 0)]);
        let mut d = Circuit::new(1);
        d.extend([GateOp::single(Gate::Phase(0.4), 0)]);
        assert!(equal_up_to_phase(&unitary(&c), &unitary(&d), 1e-12));
        let mut e = Circuit::new(1);
        e.extend([GateOp::single(Gate::Phase(0.5), 0)]);
        assert!(!equal_up_to_phase(&unitary(&c), &unitary(&e), 1e-6));
    }
}
