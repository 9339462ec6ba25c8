use std::collections::BTreeMap;

use crate::statevec::Circuit;

/// Number of layers when ops are packed as early as possible into layers of
/// disjoint qubit support. Controls count as touched qubits; the final
/// measurement is not an op and never contributes.
pub fn depth(circuit: &Circuit) -> usize {
    let mut level = vec![0usize; circuit.num_qubits()];
    let mut deepest = 0;
    for op in circuit.ops() {
        let l = op.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
        for q in op.qubits() {
            level[q] = l;
        }
        deepest = deepest.max(l);
    }
    deepest
}

/// Layer index (1-based) assigned to each op by the same greedy packing.
pub fn layer_assignment(circuit: &Circuit) -> Vec<usize> {
    let mut level = vec![0usize; circuit.num_qubits()];
    circuit
        .ops()
        .iter()
        .map(|op| {
            let l = op.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
            for q in op.qubits() {
                level[q] = l;
            }
            l
        })
        .collect()
}

/// Op counts keyed by lowercase mnemonic (`u2`, `cnot`, `toffoli`, ...).
pub fn gate_counts(circuit: &Circuit) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for op in circuit.ops() {
        *counts
            .entry(op.mnemonic().to_ascii_lowercase())
            .or_insert(0) += 1;
    }
    counts
}
