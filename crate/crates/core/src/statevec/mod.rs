//! Dense statevector simulation of small circuits with seeded sampling.

mod circuit;
mod gate;
mod state;
mod text;

pub use circuit::Circuit;
pub use gate::{Gate, GateOp, Mat2};
pub use state::{
    apply_gate, bitstring, run_circuit, sample, MeasurementRecord, StateVector, MAX_QUBITS,
};
pub(crate) use state::{sample_with_rng, CdfSampler};
pub use text::{parse_circuit, to_text};
