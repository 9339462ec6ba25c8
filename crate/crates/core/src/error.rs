use thiserror::Error;

/// Errors produced anywhere in the estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("gate qubits overlap: qubit {0} appears more than once among targets and controls")]
    OverlappingQubits(usize),

    #[error("gate {gate} expects {expected} target qubit(s), got {got}")]
    TargetArity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: circuit has {circuit} qubits, state has {state}")]
    DimensionMismatch { circuit: usize, state: usize },

    #[error("register of {requested} qubits exceeds the simulator cap of {cap}")]
    TooManyQubits { requested: usize, cap: usize },

    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("measurement requires at least one qubit")]
    EmptyQubitSet,

    #[error("number of shots must be at least 1")]
    ZeroShots,

    #[error("good state {state} does not fit in {num_qubits} domain qubits")]
    InvalidGoodState { state: usize, num_qubits: usize },

    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no decomposition rule for {0} into the requested basis")]
    NoDecomposition(String),

    #[error("gate {0} acts on more than two qubits; lower the circuit before routing")]
    UnloweredGate(String),

    #[error("coupling map {0:?} is not connected")]
    DisconnectedCouplingMap(String),

    #[error("circuit needs {logical} qubits but coupling map provides {physical}")]
    CouplingTooSmall { logical: usize, physical: usize },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("degenerate integration box: {0}")]
    DegenerateBox(String),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("no finite log-likelihood value on the search grid")]
    NoFiniteLikelihood,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
