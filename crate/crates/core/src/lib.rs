//! Amplitude-estimation laboratory.
//!
//! A dense statevector simulator carries the amplitude-amplification operator
//! (`qaa`), phase-estimation based estimation (`cqae`) and maximum-likelihood
//! estimation over independent amplified circuits (`mlqae`). Around them sit a
//! classical hit-or-miss integrator (`mci`), a basis-gate lowering and routing
//! pass with depth accounting (`transpile`), and a per-gate Pauli noise model
//! (`noise`). `report` and `repro` produce machine-readable result files.

pub mod cqae;
pub mod error;
pub mod mci;
pub mod mlqae;
pub mod noise;
pub mod oracle;
pub mod qaa;
pub mod report;
pub mod repro;
pub mod rng;
pub mod statevec;
pub mod transpile;

pub use error::{Error, Result};
