use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("gate {kind} expects {expected} parameter(s), got {got}")]
    ParamCount {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("gate {kind} expects {expected} target(s), got {got}")]
    TargetCount {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("gate targets must be distinct: {0:?}")]
    DuplicateTargets(Vec<usize>),

    #[error("register of {0} qubits exceeds the simulator limit")]
    TooManyQubits(usize),

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("channel acts on {expected} qubit(s) but {got} target(s) were given")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("confusion matrix is not row-stochastic")]
    NotStochastic,

    #[error("relaxation parameters rejected: {0}")]
    Relaxation(String),

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("cannot embed a vector with (near) zero norm")]
    ZeroNorm,

    #[error("unknown kind `{0}`")]
    UnknownKind(String),

    #[error("invalid device spec: {0}")]
    Device(String),

    #[error("no decomposition rule for gate {0} into the native set")]
    NoDecomposition(String),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("missing noise parameters: {0}")]
    MissingNoise(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("model file rejected: {0}")]
    ModelFile(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
