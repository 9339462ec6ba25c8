use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::coupling::{check_layout, CouplingMap};
use super::depth::{depth, gate_counts};
use super::lower::{lower, BasisGateSet};
use crate::error::{Error, Result};
use crate::statevec::{Circuit, GateOp};

/// A circuit placed on physical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct LoweredCircuit {
    /// Ops on physical qubits. Measured qubits are the physical homes of the
    /// logical measured qubits at the end of the circuit, in logical order.
    pub circuit: Circuit,
    /// Logical → physical before the first op.
    pub initial_layout: Vec<usize>,
    /// Logical → physical after the last op.
    pub final_layout: Vec<usize>,
    pub swaps: usize,
    pub depth: usize,
    pub gate_counts: BTreeMap<String, usize>,
}

/// Serializable summary of a [`LoweredCircuit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranspileSummary {
    pub coupling_map: String,
    pub logical_qubits: usize,
    pub physical_qubits: usize,
    pub initial_layout: Vec<usize>,
    pub final_layout: Vec<usize>,
    pub swaps: usize,
    pub depth: usize,
    pub gate_counts: BTreeMap<String, usize>,
}

impl LoweredCircuit {
    pub fn summary(&self, coupling: &CouplingMap) -> TranspileSummary {
        TranspileSummary {
            coupling_map: coupling.name.clone(),
            logical_qubits: self.initial_layout.len(),
            physical_qubits: self.circuit.num_qubits(),
            initial_layout: self.initial_layout.clone(),
            final_layout: self.final_layout.clone(),
            swaps: self.swaps,
            depth: self.depth,
            gate_counts: self.gate_counts.clone(),
        }
    }
}

/// Inserts SWAPs (each as three CNOTs) so that every two-qubit op acts on a
/// coupled pair. The target operand walks along a shortest path toward the
/// control. `layout` defaults to identity.
pub fn route(
    circuit: &Circuit,
    coupling: &CouplingMap,
    layout: Option<&[usize]>,
) -> Result<LoweredCircuit> {
    let logical = circuit.num_qubits();
    let physical = coupling.qubits;
    if logical > physical {
        return Err(Error::CouplingTooSmall { logical, physical });
    }
    if !coupling.is_connected() {
        return Err(Error::DisconnectedCouplingMap(coupling.name.clone()));
    }
    let initial: Vec<usize> = match layout {
        Some(l) => {
            if l.len() != logical {
                return Err(Error::InvalidLayout(format!(
                    "layout has {} entries for {logical} logical qubits",
                    l.len()
                )));
            }
            check_layout(l, physical)?;
            l.to_vec()
        }
        None => (0..logical).collect(),
    };

    // Track every physical qubit so that idle ones can be swapped through.
    let mut log_to_phys: Vec<usize> = initial.clone();
    let mut phys_to_log: Vec<Option<usize>> = vec![None; physical];
    for (l, &p) in initial.iter().enumerate() {
        phys_to_log[p] = Some(l);
    }
    // Unused physical qubits get virtual logical indices ≥ `logical`.
    for (p, slot) in phys_to_log.iter_mut().enumerate() {
        if slot.is_none() {
            *slot = Some(log_to_phys.len());
            log_to_phys.push(p);
        }
    }

    let mut out = Circuit::new(physical);
    let mut swaps = 0;
    for op in circuit.ops() {
        match op.arity() {
            0 | 1 => {
                out.add(op.remapped(&log_to_phys));
            }
            2 => {
                let qs: Vec<usize> = op.qubits().collect();
                let (a, b) = (qs[0], qs[1]);
                let path = coupling
                    .shortest_path(log_to_phys[a], log_to_phys[b])
                    .ok_or_else(|| Error::DisconnectedCouplingMap(coupling.name.clone()))?;
                for w in path.windows(2).take(path.len().saturating_sub(2)) {
                    let (p, q) = (w[0], w[1]);
                    out.add(GateOp::cnot(p, q));
                    out.add(GateOp::cnot(q, p));
                    out.add(GateOp::cnot(p, q));
                    let (lp, lq) = (phys_to_log[p].unwrap(), phys_to_log[q].unwrap());
                    phys_to_log.swap(p, q);
                    log_to_phys[lp] = q;
                    log_to_phys[lq] = p;
                    swaps += 1;
                }
                debug_assert!(coupling.are_coupled(log_to_phys[a], log_to_phys[b]));
                out.add(op.remapped(&log_to_phys));
            }
            _ => return Err(Error::UnloweredGate(op.to_string())),
        }
    }
    log_to_phys.truncate(logical);
    let measured: Vec<usize> = circuit
        .measured_qubits()
        .iter()
        .map(|&q| log_to_phys[q])
        .collect();
    out.set_measured(measured)?;
    Ok(LoweredCircuit {
        depth: depth(&out),
        gate_counts: gate_counts(&out),
        circuit: out,
        initial_layout: initial,
        final_layout: log_to_phys,
        swaps,
    })
}

/// [`lower`] followed by [`route`].
pub fn transpile(
    circuit: &Circuit,
    basis: &BasisGateSet,
    coupling: &CouplingMap,
    layout: Option<&[usize]>,
) -> Result<LoweredCircuit> {
    let lowered = lower(circuit, basis)?;
    route(&lowered, coupling, layout)
}
