use serde::{Deserialize, Serialize};

use super::gate::GateOp;
use crate::error::{Error, Result};

/// Ordered list of gate applications on a fixed register, plus the qubits
/// read out at the end.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
    measured: Vec<usize>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            ops: Vec::new(),
            measured: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured
    }

    /// Validates and appends an op.
    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    /// Appends an op built internally from known-good indices.
    pub(crate) fn add(&mut self, op: GateOp) -> &mut Self {
        debug_assert!(op.validate(self.num_qubits).is_ok(), "bad op {op}");
        self.ops.push(op);
        self
    }

    pub fn set_measured(&mut self, qubits: Vec<usize>) -> Result<&mut Self> {
        for &q in &qubits {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        self.measured = qubits;
        Ok(self)
    }

    /// Appends all of `other`'s ops, with `other`'s qubit `i` placed on `map[i]`.
    pub fn compose(&mut self, other: &Circuit, map: &[usize]) -> Result<&mut Self> {
        if map.len() != other.num_qubits {
            return Err(Error::InvalidLayout(format!(
                "qubit map has {} entries for a {}-qubit circuit",
                map.len(),
                other.num_qubits
            )));
        }
        for op in &other.ops {
            self.push(op.remapped(map))?;
        }
        Ok(self)
    }

    /// Appends `other` on the same qubit labels.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::DimensionMismatch {
                circuit: other.num_qubits,
                state: self.num_qubits,
            });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(self)
    }

    /// Gate-wise reversed, element-wise inverted circuit.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
            measured: Vec::new(),
        }
    }

    /// Every op gains `control` as an extra control qubit.
    pub fn controlled_by(&self, control: usize) -> Result<Circuit> {
        let mut out = Circuit::new(self.num_qubits.max(control + 1));
        for op in &self.ops {
            out.push(op.with_control(control))?;
        }
        Ok(out)
    }

    /// Same ops on a register of `num_qubits` (must not shrink below the ops' span).
    pub fn widened(&self, num_qubits: usize) -> Result<Circuit> {
        let mut out = Circuit::new(num_qubits);
        for op in &self.ops {
            out.push(op.clone())?;
        }
        out.set_measured(self.measured.clone())?;
        Ok(out)
    }

    /// Number of ops with `arity` qubits or more.
    pub fn count_multi_qubit(&self, arity: usize) -> usize {
        self.ops.iter().filter(|op| op.arity() >= arity).count()
    }
}

impl Extend<GateOp> for Circuit {
    fn extend<T: IntoIterator<Item = GateOp>>(&mut self, iter: T) {
        for op in iter {
            self.add(op);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::Gate;

    #[test]
    fn inverse_reverses_and_inverts() {
        let mut c = Circuit::new(2);
        c.add(GateOp::single(Gate::T, 0)).add(GateOp::cnot(0, 1));
        let inv = c.inverse();
        assert_eq!(inv.ops()[0], GateOp::cnot(0, 1));
        assert_eq!(inv.ops()[1], GateOp::single(Gate::Tdg, 0));
    }

    #[test]
    fn push_rejects_out_of_range() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(GateOp::cnot(0, 2)),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn controlled_by_adds_one_control_everywhere() {
        let mut c = Circuit::new(3);
        c.add(GateOp::h(0)).add(GateOp::toffoli(0, 1, 2));
        let cc = c.controlled_by(3).unwrap();
        assert_eq!(cc.num_qubits(), 4);
        assert!(cc.ops().iter().all(|op| op.controls.contains(&3)));
    }
}
