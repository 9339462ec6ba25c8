use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::decompose::{expand_controls, u3_params};
use crate::error::{Error, Result};
use crate::statevec::{Circuit, Gate, GateOp};

const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisGate {
    U1,
    U2,
    U3,
    Cnot,
}

impl FromStr for BasisGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "u1" => Ok(BasisGate::U1),
            "u2" => Ok(BasisGate::U2),
            "u3" => Ok(BasisGate::U3),
            "cx" | "cnot" => Ok(BasisGate::Cnot),
            other => Err(Error::InvalidArgument(format!(
                "unknown basis gate {other:?}"
            ))),
        }
    }
}

/// Gate kinds a lowered circuit may contain. Defaults to `{u1, u2, u3, cx}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisGateSet {
    gates: BTreeSet<BasisGate>,
}

impl Default for BasisGateSet {
    fn default() -> Self {
        BasisGateSet::new([BasisGate::U1, BasisGate::U2, BasisGate::U3, BasisGate::Cnot])
    }
}

impl BasisGateSet {
    pub fn new(gates: impl IntoIterator<Item = BasisGate>) -> Self {
        BasisGateSet {
            gates: gates.into_iter().collect(),
        }
    }

    pub fn contains(&self, g: BasisGate) -> bool {
        self.gates.contains(&g)
    }

    /// Whether `op` is already a member of the basis.
    pub fn allows(&self, op: &GateOp) -> bool {
        match (op.gate, op.controls.len()) {
            (Gate::U1(_), 0) => self.contains(BasisGate::U1),
            (Gate::U2(..), 0) => self.contains(BasisGate::U2),
            (Gate::U3(..), 0) => self.contains(BasisGate::U3),
            (Gate::X, 1) => self.contains(BasisGate::Cnot),
            _ => false,
        }
    }

    /// Whether every op of `circuit` is in the basis.
    pub fn admits(&self, circuit: &Circuit) -> bool {
        circuit.ops().iter().all(|op| self.allows(op))
    }
}

impl FromStr for BasisGateSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let gates = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(BasisGate::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(BasisGateSet::new(gates))
    }
}

impl fmt::Display for BasisGateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .gates
            .iter()
            .map(|g| match g {
                BasisGate::U1 => "u1",
                BasisGate::U2 => "u2",
                BasisGate::U3 => "u3",
                BasisGate::Cnot => "cx",
            })
            .collect();
        f.write_str(&names.join(","))
    }
}

/// Rewrites `circuit` so that only `basis` gates remain. The result equals the
/// input up to a global phase.
pub fn lower(circuit: &Circuit, basis: &BasisGateSet) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.num_qubits());
    for op in circuit.ops() {
        if basis.allows(op) {
            out.add(op.clone());
            continue;
        }
        for piece in expand_controls(op) {
            if piece.controls.is_empty() {
                let g = single_qubit_to_basis(piece.gate, basis)?;
                out.add(GateOp::single(g, piece.targets[0]));
            } else if basis.contains(BasisGate::Cnot) {
                debug_assert!(piece.gate == Gate::X && piece.controls.len() == 1);
                out.add(piece);
            } else {
                return Err(Error::NoDecomposition(op.mnemonic()));
            }
        }
    }
    out.set_measured(circuit.measured_qubits().to_vec())?;
    Ok(out)
}

/// Cheapest basis member equal to `gate` up to global phase. Identities are
/// kept as `U1(0)` so that lowering never shortens a circuit.
fn single_qubit_to_basis(gate: Gate, basis: &BasisGateSet) -> Result<Gate> {
    let m = gate
        .matrix()
        .ok_or_else(|| Error::NoDecomposition(gate.name().into()))?;
    let p = u3_params(&m);
    let (phi, lambda) = (wrap(p.phi), wrap(p.lambda));
    let g = if p.theta.abs() < ANGLE_EPS {
        let mut total = wrap(phi + lambda);
        if total.abs() < ANGLE_EPS {
            total = 0.0;
        }
        if basis.contains(BasisGate::U1) {
            Gate::U1(total)
        } else {
            Gate::U3(0.0, 0.0, total)
        }
    } else if (p.theta - FRAC_PI_2).abs() < ANGLE_EPS && basis.contains(BasisGate::U2) {
        Gate::U2(phi, lambda)
    } else {
        Gate::U3(p.theta, phi, lambda)
    };
    let needed = match g {
        Gate::U1(_) => BasisGate::U1,
        Gate::U2(..) => BasisGate::U2,
        _ => BasisGate::U3,
    };
    if basis.contains(needed) {
        Ok(g)
    } else {
        Err(Error::NoDecomposition(gate.name().into()))
    }
}

/// Maps an angle into `(−π, π]`.
fn wrap(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    if (r + PI).abs() < ANGLE_EPS {
        r = PI;
    }
    r
}
