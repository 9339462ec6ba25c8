//! Basis-gate lowering, coupling-constrained routing and depth accounting.
//!
//! Lowered circuits contain only `U1`, `U2`, `U3` and `CNOT` (or a
//! user-chosen subset). Depth is the number of greedy as-soon-as-possible
//! layers; see [`depth`].

mod coupling;
mod decompose;
mod depth;
mod lower;
mod route;

pub use coupling::{CouplingMap, PRESET_MAPS};
pub use decompose::{decompose_mcx, decompose_toffoli, mcx_ancillae, u3_params, McxMode, U3Params};
pub use depth::{depth, gate_counts, layer_assignment};
pub use lower::{lower, BasisGate, BasisGateSet};
pub use route::{route, transpile, LoweredCircuit, TranspileSummary};
