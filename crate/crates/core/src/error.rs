use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex not in graph: {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex: {0}")]
    DuplicateVertex(String),
    #[error("self-loop on vertex {0}")]
    SelfLoop(String),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),
    #[error("enumeration cap exceeded: n = {n} > cap {cap}")]
    EnumerationCapExceeded { n: usize, cap: usize },
    #[error("vertex count {n} exceeds search cap {cap}")]
    SearchCapExceeded { n: usize, cap: usize },
    #[error("|I| = {inputs} differs from |O| = {outputs}")]
    InputOutputSizeMismatch { inputs: usize, outputs: usize },

    #[error("unknown qubit: {0}")]
    UnknownQubit(String),
    #[error("qubit label mismatch: {0}")]
    LabelMismatch(String),
    #[error("incompatible qubit label sets")]
    IncompatibleLabels,
    #[error("generators do not commute: {0} and {1}")]
    NonCommuting(String, String),
    #[error("generators are not independent")]
    DependentGenerators,
    #[error("cannot parse Pauli string {0:?}")]
    PauliParse(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("register of {n} qubits exceeds the simulator cap of {cap}")]
    RegisterTooLarge { n: usize, cap: usize },
    #[error("amplitude vector has length {len}, expected {expected}")]
    AmplitudeLength { len: usize, expected: usize },
    #[error("state is not normalised (norm^2 = {0})")]
    NotNormalised(f64),
    #[error("measurement axis is not a unit vector")]
    BadAxis,
    #[error("outcome has zero probability (qubit {qubit}, p = {probability:e})")]
    ZeroProbability { qubit: String, probability: f64 },
    #[error("cannot discard entangled qubit {qubit} (reduced purity {purity})")]
    EntangledQubit { qubit: String, purity: f64 },
    #[error("prescribed outcome list exhausted")]
    OutcomesExhausted,

    #[error("state outside codespace: parity qubit {0} is not |0> after unencoding")]
    OutsideCodespace(String),
    #[error("X rotation on data qubit {data} while parity qubit {parity} still encodes it")]
    RotationOnEncodedQubit { data: String, parity: String },
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("computation needs at least one layer")]
    NoLayers,

    #[error("malformed flow: {0}")]
    MalformedFlow(String),
    #[error("invalid flow: {0}")]
    InvalidFlow(String),
    #[error("graph not bipartite with I as partition")]
    NotBipartite,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
