use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The base operation of a [`GateOp`]. Controls are carried by the op, so
/// `X` with one control is a CNOT, `X` with two is a Toffoli, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    /// `diag(e^{-iθ/2}, e^{iθ/2})`
    Rz(f64),
    /// `diag(1, e^{iλ})`
    Phase(f64),
    /// Basis phase gate, same matrix as [`Gate::Phase`].
    U1(f64),
    /// `U3(π/2, φ, λ)`
    U2(f64, f64),
    /// Generic single-qubit rotation `U3(θ, φ, λ)`.
    U3(f64, f64, f64),
    Swap,
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::S => "S",
            Gate::Sdg => "SDG",
            Gate::T => "T",
            Gate::Tdg => "TDG",
            Gate::Rz(_) => "RZ",
            Gate::Phase(_) => "PHASE",
            Gate::U1(_) => "U1",
            Gate::U2(..) => "U2",
            Gate::U3(..) => "U3",
            Gate::Swap => "SWAP",
        }
    }

    pub fn num_targets(&self) -> usize {
        match self {
            Gate::Swap => 2,
            _ => 1,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::Rz(a) | Gate::Phase(a) | Gate::U1(a) => vec![a],
            Gate::U2(phi, lambda) => vec![phi, lambda],
            Gate::U3(theta, phi, lambda) => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }

    pub fn num_params(&self) -> usize {
        self.params().len()
    }

    /// Rebuilds a gate of the same kind from `params` (used by the text parser).
    pub(crate) fn with_params(&self, params: &[f64]) -> Gate {
        match self {
            Gate::Rz(_) => Gate::Rz(params[0]),
            Gate::Phase(_) => Gate::Phase(params[0]),
            Gate::U1(_) => Gate::U1(params[0]),
            Gate::U2(..) => Gate::U2(params[0], params[1]),
            Gate::U3(..) => Gate::U3(params[0], params[1], params[2]),
            g => *g,
        }
    }

    /// Single-qubit unitary; `None` for SWAP.
    pub fn matrix(&self) -> Option<Mat2> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let m = match *self {
            Gate::X => [[ZERO, ONE], [ONE, ZERO]],
            Gate::Y => [[ZERO, -I], [I, ZERO]],
            Gate::Z => [[ONE, ZERO], [ZERO, -ONE]],
            Gate::H => [[h, h], [h, -h]],
            Gate::S => phase(FRAC_PI_2),
            Gate::Sdg => phase(-FRAC_PI_2),
            Gate::T => phase(FRAC_PI_4),
            Gate::Tdg => phase(-FRAC_PI_4),
            Gate::Rz(theta) => [
                [Complex64::from_polar(1.0, -theta / 2.0), ZERO],
                [ZERO, Complex64::from_polar(1.0, theta / 2.0)],
            ],
            Gate::Phase(lambda) | Gate::U1(lambda) => phase(lambda),
            Gate::U2(phi, lambda) => u3(FRAC_PI_2, phi, lambda),
            Gate::U3(theta, phi, lambda) => u3(theta, phi, lambda),
            Gate::Swap => return None,
        };
        Some(m)
    }

    /// Exact inverse (no global phase slack).
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S => Gate::Sdg,
            Gate::Sdg => Gate::S,
            Gate::T => Gate::Tdg,
            Gate::Tdg => Gate::T,
            Gate::Rz(a) => Gate::Rz(-a),
            Gate::Phase(a) => Gate::Phase(-a),
            Gate::U1(a) => Gate::U1(-a),
            Gate::U2(phi, lambda) => Gate::U2(-lambda - PI, -phi + PI),
            Gate::U3(theta, phi, lambda) => Gate::U3(-theta, -lambda, -phi),
            g => g,
        }
    }

    /// Parses a base gate name; parameterized gates come back with zero angles.
    pub fn from_name(name: &str) -> Option<Gate> {
        let g = match name.to_ascii_uppercase().as_str() {
            "X" => Gate::X,
            "Y" => Gate::Y,
            "Z" => Gate::Z,
            "H" => Gate::H,
            "S" => Gate::S,
            "SDG" => Gate::Sdg,
            "T" => Gate::T,
            "TDG" => Gate::Tdg,
            "RZ" => Gate::Rz(0.0),
            "PHASE" | "P" => Gate::Phase(0.0),
            "U1" => Gate::U1(0.0),
            "U2" => Gate::U2(0.0, 0.0),
            "U3" => Gate::U3(0.0, 0.0, 0.0),
            "SWAP" => Gate::Swap,
            _ => return None,
        };
        Some(g)
    }
}

fn phase(lambda: f64) -> Mat2 {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, lambda)]]
}

fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, phi + lambda),
        ],
    ]
}

/// One gate application: a base [`Gate`] on `targets`, conditioned on every
/// qubit in `controls` being `|1⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub gate: Gate,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
}

impl GateOp {
    pub fn new(gate: Gate, targets: Vec<usize>, controls: Vec<usize>) -> Self {
        GateOp {
            gate,
            targets,
            controls,
        }
    }

    pub fn single(gate: Gate, target: usize) -> Self {
        GateOp::new(gate, vec![target], Vec::new())
    }

    pub fn controlled(gate: Gate, controls: &[usize], target: usize) -> Self {
        GateOp::new(gate, vec![target], controls.to_vec())
    }

    pub fn x(q: usize) -> Self {
        GateOp::single(Gate::X, q)
    }

    pub fn h(q: usize) -> Self {
        GateOp::single(Gate::H, q)
    }

    pub fn z(q: usize) -> Self {
        GateOp::single(Gate::Z, q)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::controlled(Gate::X, &[control], target)
    }

    pub fn cz(control: usize, target: usize) -> Self {
        GateOp::controlled(Gate::Z, &[control], target)
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        GateOp::controlled(Gate::X, &[c0, c1], target)
    }

    pub fn mcx(controls: &[usize], target: usize) -> Self {
        GateOp::controlled(Gate::X, controls, target)
    }

    pub fn swap(a: usize, b: usize) -> Self {
        GateOp::new(Gate::Swap, vec![a, b], Vec::new())
    }

    /// Every qubit touched by the op, targets first.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(self.controls.iter()).copied()
    }

    pub fn arity(&self) -> usize {
        self.targets.len() + self.controls.len()
    }

    pub fn inverse(&self) -> GateOp {
        GateOp::new(
            self.gate.inverse(),
            self.targets.clone(),
            self.controls.clone(),
        )
    }

    /// Same op with one more control qubit.
    pub fn with_control(&self, control: usize) -> GateOp {
        let mut controls = self.controls.clone();
        controls.push(control);
        GateOp::new(self.gate, self.targets.clone(), controls)
    }

    /// Relabels every qubit through `map`.
    pub fn remapped(&self, map: &[usize]) -> GateOp {
        GateOp::new(
            self.gate,
            self.targets.iter().map(|&q| map[q]).collect(),
            self.controls.iter().map(|&q| map[q]).collect(),
        )
    }

    /// Checks target arity, index range and disjointness against a register size.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.targets.len() != self.gate.num_targets() {
            return Err(Error::TargetArity {
                gate: self.gate.name(),
                expected: self.gate.num_targets(),
                got: self.targets.len(),
            });
        }
        let mut seen = 0u64;
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
            if q < 64 {
                if seen & (1 << q) != 0 {
                    return Err(Error::OverlappingQubits(q));
                }
                seen |= 1 << q;
            }
        }
        Ok(())
    }

    /// Canonical text-format mnemonic for the op.
    pub fn mnemonic(&self) -> String {
        match (self.gate, self.controls.len()) {
            (Gate::X, 1) => "CNOT".into(),
            (Gate::X, 2) => "TOFFOLI".into(),
            (Gate::X, k) if k > 2 => "MCX".into(),
            (Gate::Z, 1) => "CZ".into(),
            (Gate::Z, k) if k > 1 => "MCZ".into(),
            (g, _) => g.name().into(),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        for p in self.gate.params() {
            write!(f, " {p:?}")?;
        }
        Ok(())
    }
}
